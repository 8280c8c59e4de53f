"""Brute-force reference implementations shared by the test modules."""
from soficlab.formula import Abs, Clamp, Const, Diff, Inf, Len, Max, Min, Scale, Sum, Sup


def oracle(node, g, env=None):
    env = env or {}
    if isinstance(node, Len):
        x = int(g.identity())
        for v, e in node.word:
            a = env[v] if e > 0 else int(g.inverse(env[v]))
            for _ in range(abs(e)):
                x = int(g.table[x, a])
        return g.lengths[x]
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Max):
        return max(oracle(a, g, env) for a in node.args)
    if isinstance(node, Min):
        return min(oracle(a, g, env) for a in node.args)
    if isinstance(node, Sum):
        return oracle(node.a, g, env) + oracle(node.b, g, env)
    if isinstance(node, Diff):
        return oracle(node.a, g, env) - oracle(node.b, g, env)
    if isinstance(node, Scale):
        return node.q * oracle(node.a, g, env)
    if isinstance(node, Abs):
        return abs(oracle(node.a, g, env))
    if isinstance(node, Clamp):
        return min(1, max(0, oracle(node.a, g, env)))
    vals = [oracle(node.body, g, {**env, node.var: x}) for x in range(g.order)]
    return max(vals) if isinstance(node, Sup) else min(vals)


