"""Command-line front end.

Every subcommand prints ``key=value`` lines. ``--format record`` adds the
effective configuration and a final JSON summary line; output never depends
on wall-clock time, so equal configurations give byte-identical records.

Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import entropy as ent
from .config import CapExceeded, Caps, RunConfig
from .perm import (Permutation, block_embed, format_fraction, format_perm, hamming_length,
                   parse_perm, tensor_power_perm)


class UsageError(Exception):
    pass


# -- output ----------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    if isinstance(v, complex):
        return f"{v.real:.12g}{'+' if v.imag >= 0 else '-'}{abs(v.imag):.12g}i"
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    if v is None:
        return "none"
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return _fmt(v)


class Report:
    def __init__(self, command: str, cfg: RunConfig, stream=None):
        self.command = command
        self.cfg = cfg
        self.stream = stream or sys.stdout
        self.summary: dict = {}
        self.ok = True

    def line(self, **kv):
        """One output line; the last value of each key goes to the summary."""
        self.stream.write(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()) + "\n")
        for k, v in kv.items():
            self.summary[k] = _jsonable(v)

    def row(self, **kv):
        """Table row: printed but kept out of the summary."""
        self.stream.write(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()) + "\n")

    def text(self, s: str):
        self.stream.write(s if s.endswith("\n") else s + "\n")

    def check(self, name: str, ok: bool):
        ok = bool(ok)
        self.line(**{name: ok})
        self.ok = self.ok and ok

    def header(self):
        if self.cfg.output == "record":
            echo = self.cfg.echo()
            self.stream.write(f"command={self.command}\n")
            for k in ("seed", "workers", "backend"):
                self.stream.write(f"{k}={echo[k]}\n")
            for k, v in echo["caps"].items():
                self.stream.write(f"cap.{k}={v}\n")
        else:
            echo = self.cfg.echo()
            self.stream.write(f"# {self.command} seed={echo['seed']} workers={echo['workers']} "
                              f"cap.enum={echo['caps']['enum']} cap.work={echo['caps']['work']}\n")

    def footer(self):
        if self.cfg.output == "record":
            doc = {"command": self.command, "config": self.cfg.echo(), "ok": self.ok,
                   "result": self.summary}
            self.stream.write(json.dumps(doc, sort_keys=True) + "\n")


# -- argument helpers ----------------------------------------------------------------------

def _read_in(args) -> str:
    if not getattr(args, "infile", None):
        raise UsageError("this subcommand needs --in <path>")
    with open(args.infile) as fh:
        return fh.read()


def _perm(text: str) -> Permutation:
    try:
        return parse_perm(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _perm_list(text: str) -> list[Permutation]:
    return [_perm(t) for t in text.split("|") if t.strip()]


def _fraction_list(text: str) -> list[Fraction]:
    return [Fraction(t) for t in text.split(",") if t.strip()]


def _int_range(text: str) -> list[int]:
    """``2..6`` or ``2,3,5``."""
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(t) for t in text.split(",") if t.strip()]


def _vectors(text: str) -> list[tuple[int, ...]]:
    """``1;-1;2`` or ``1,0;0,1``."""
    return [tuple(int(c) for c in part.split(",")) for part in text.split(";") if part.strip()]


def _presentation(args):
    from .stability import builtin, parse_presentation
    if getattr(args, "infile", None):
        return parse_presentation(_read_in(args), name=args.infile)
    try:
        return builtin(args.presentation)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _group(ref: str, caps):
    from .groups import named_group
    try:
        return named_group(ref, caps=caps)
    except (ValueError, OSError) as exc:
        raise UsageError(f"cannot resolve group {ref!r}: {exc}") from None


def _model(spec: str, caps):
    """``lattice:d``, ``free:k``, ``presentation:<name or path>`` or a group reference."""
    from .approx import LatticeModel, PresentationModel, TableModel
    kind, _, rest = spec.partition(":")
    if kind == "lattice":
        return LatticeModel(int(rest or 1))
    if kind == "free":
        k = int(rest or 1)
        return PresentationModel([f"g{i}" for i in range(k)], (), name=f"F{k}")
    if kind == "presentation":
        from .stability import builtin, parse_presentation
        try:
            p = builtin(rest)
        except ValueError:
            with open(rest) as fh:
                p = parse_presentation(fh.read())
        return PresentationModel(p.gens, p.relators, name=p.name or rest)
    return TableModel(_group(spec, caps))


def _regular_morphism(group):
    """Left regular representation of a table group, as an exact morphism."""
    from .approx import ApproxMorphism, TableModel
    model = TableModel(group)
    images = [Permutation(group.table[g], check=False) for g in range(group.order)]
    return ApproxMorphism(model, list(range(group.order)), images)


def _load_morphism(args, caps):
    from .approx import parse_morphism
    if not args.model:
        raise UsageError("--model is required with --in")
    try:
        return parse_morphism(_read_in(args), _model(args.model, caps))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _report_defect(rep: Report, phi, prefix: str = ""):
    from .approx import defect
    d = defect(phi)
    rep.line(**{f"{prefix}mult_defect": d.mult, f"{prefix}length_defect": d.length,
                f"{prefix}pairs": d.pairs, f"{prefix}unresolved": len(d.unresolved)})
    if d.worst_pair is not None:
        rep.line(**{f"{prefix}worst_pair": "(" + ";".join(d.worst_pair) + ")"})
    return d


def _write_out(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)


# -- metric groups -----------------------------------------------------------------------------

def cmd_length(args, cfg, rep):
    from .unitary import hs_metrics, parse_matrix
    if args.perm:
        s = _perm(args.perm)
        rep.line(length=hamming_length(s))
        return
    if args.group:
        g = _group(args.group, cfg.caps)
        if not args.element:
            raise UsageError("--group needs --element")
        try:
            x = g.index(args.element)
        except ValueError:
            raise UsageError(f"no element named {args.element!r}") from None
        rep.line(length=g.length(x))
        return
    a = parse_matrix(_read_in(args))
    tr, norm, ln = hs_metrics(a)
    rep.line(trace=complex(tr), hs_norm=norm, length=ln)


def cmd_amplify(args, cfg, rep):
    from .unitary import ntrace, parse_matrix, tensor_power_unitary
    if args.perm:
        s = _perm(args.perm)
        t = tensor_power_perm(s, args.k, caps=cfg.caps)
        l0, lk = hamming_length(s), hamming_length(t)
        pred = 1 - (1 - l0) ** args.k
        rep.line(degree=t.n, length=lk, predicted=pred)
        rep.check("identity_holds", lk == pred)
        if args.print:
            rep.text(format_perm(t))
        return
    u = parse_matrix(_read_in(args))
    v = tensor_power_unitary(u, args.k, caps=cfg.caps)
    t1, tk = ntrace(u), ntrace(v)
    rep.line(dimension=v.shape[0], trace=complex(tk), predicted=complex(t1 ** args.k))
    rep.check("identity_holds", abs(tk - t1 ** args.k) <= 1e-10)


def cmd_embed(args, cfg, rep):
    s = _perm(args.perm)
    if args.N <= s.n:
        raise UsageError("--N must exceed the degree")
    t = block_embed(s, args.N, caps=cfg.caps)
    k = args.N // s.n
    l0, l1 = hamming_length(s), hamming_length(t)
    rep.line(degree=t.n, copies=k, length=l1, original=l0, gap=abs(l1 - l0), bound=Fraction(1, k))
    rep.check("holds", abs(l1 - l0) <= Fraction(1, k))
    if args.print:
        rep.text(format_perm(t))


def cmd_polar(args, cfg, rep):
    from .unitary import (hs_distance, parse_matrix, polar_repair, random_hermitian,
                          random_unitary, unitarity_defect, format_matrix)
    if args.infile:
        a = parse_matrix(_read_in(args))
        w = polar_repair(a)
        rep.line(dimension=a.shape[0], input_defect=unitarity_defect(a),
                 output_defect=unitarity_defect(w), distance=hs_distance(a, w))
        rep.check("unitary", unitarity_defect(w) <= 1e-10)
        if args.print:
            rep.text(format_matrix(w))
        return
    rng = np.random.default_rng(cfg.seed)
    worst_defect, worst_excess, ok = 0.0, -math.inf, True
    for t in range(args.trials):
        u = random_unitary(args.n, rng)
        a = u @ (np.eye(args.n) + args.noise * random_hermitian(args.n, rng))
        w = polar_repair(a)
        dfc = unitarity_defect(w)
        excess = hs_distance(a, w) - hs_distance(a, u)
        worst_defect = max(worst_defect, dfc)
        worst_excess = max(worst_excess, excess)
        ok = ok and dfc <= 1e-10 and excess <= 1e-9
    rep.line(trials=args.trials, n=args.n, noise=args.noise, max_output_defect=worst_defect,
             max_excess_distance=worst_excess)
    rep.check("holds", ok)


def cmd_microstate(args, cfg, rep):
    from .unitary import iter_matrix_blocks, microstate_defect, permutation_matrix
    if args.infile:
        mats = list(iter_matrix_blocks(_read_in(args)))
    elif args.phi == "cycle":
        mats = [permutation_matrix(Permutation.cycle(args.n))]
    else:
        mats = [np.eye(args.n, dtype=np.complex128)]
    if args.gamma == "Z":
        if len(mats) != 1:
            raise UsageError("Gamma=Z takes one generator matrix")
        oracle = lambda w: sum(e for _, e in w) == 0
    elif args.gamma == "free":
        oracle = lambda w: len(w) == 0
    else:
        oracle = lambda w: True
    r = microstate_defect(mats, oracle, args.word_len)
    rep.line(dimension=mats[0].shape[0], words=r.words_checked, skipped=r.skipped_count, defect=r.defect)


# -- approximate morphisms -------------------------------------------------------------------------

def cmd_morphism_defect(args, cfg, rep):
    phi = _load_morphism(args, cfg.caps)
    rep.line(domain=len(phi.domain), degree=phi.degree, target=phi.target)
    _report_defect(rep, phi)
    rep.check("identity_ok", phi.identity_ok())


def cmd_folner(args, cfg, rep):
    from .approx import folner_epsilon, folner_morphism, format_morphism, lattice_box
    shape = tuple(int(v) for v in args.box.split(","))
    F = _vectors(args.F) if args.F else [tuple(1 if i == j else 0 for i in range(len(shape)))
                                         for j in range(len(shape))]
    if any(len(g) != len(shape) for g in F):
        raise UsageError("F vectors must match the box dimension")
    phi, eps = folner_morphism(shape, F)
    eps_k = folner_epsilon(lattice_box(shape), F)
    rep.line(degree=phi.degree, domain=len(phi.domain), eps=eps_k)
    d = _report_defect(rep, phi)
    rep.line(bound=2 * eps_k)
    rep.check("holds", d.mult <= 2 * eps_k)
    _write_out(args, format_morphism(phi))


def cmd_nice_repair(args, cfg, rep):
    from .approx import format_morphism, is_nice, nice_repair
    phi = _regular_morphism(_group(args.group, cfg.caps)) if args.group else _load_morphism(args, cfg.caps)
    out = nice_repair(phi)
    ok, problems = is_nice(out)
    rep.line(degree=out.degree, domain=len(out.domain))
    _report_defect(rep, phi, "input_")
    _report_defect(rep, out)
    for msg in problems[:5]:
        rep.row(problem=msg.replace(" ", "_"))
    rep.check("nice", ok)
    _write_out(args, format_morphism(out))


def cmd_to_unitary(args, cfg, rep):
    from .approx import defect, to_unitary
    from .unitary import hs_length
    phi = _regular_morphism(_group(args.group, cfg.caps)) if args.group else _load_morphism(args, cfg.caps)
    u = to_unitary(phi)
    ds, du = defect(phi), defect(u)
    worst = max(abs(hs_length(m) ** 2 - float(s.moved_points()) / s.n / 2)
                for s, m in zip(phi.images, u.images))
    rep.line(degree=u.degree, sym_mult_defect=ds.mult, unitary_mult_defect=du.mult,
             length_relation_error=worst)
    rep.check("holds", worst <= 1e-12 and du.mult <= math.sqrt(float(ds.mult) / 2) + 1e-12)


def cmd_free_product(args, cfg, rep):
    from .approx import free_product_morphism, nice_repair
    phis = []
    for ref in (args.g0, args.g1):
        phi = _regular_morphism(_group(ref, cfg.caps))
        phis.append(phi)
    if phis[0].degree != phis[1].degree:
        raise UsageError("both factors need the same order (regular representations)")
    out = free_product_morphism(phis[0], phis[1], args.N, caps=cfg.caps)
    lens = [Fraction(s.moved_points(), s.n) for g, s in out.items() if g != ()]
    rep.line(degree=out.degree, domain=len(out.domain), min_nonidentity_length=min(lens) if lens else None)
    d = _report_defect(rep, out)
    rep.check("identity_ok", out.identity_ok())


# -- formulas ------------------------------------------------------------------------------------

def _formula_text(args) -> str:
    if args.formula:
        return args.formula
    return _read_in(args)


def _formula_group(ref: str, caps):
    import re
    from .groups import symmetric
    m = re.fullmatch(r"S(\d+)", ref)
    if m:
        return symmetric(int(m.group(1)))
    return _group(ref, caps)


def _mode(args):
    from .formula import Sampled
    return "exact" if args.mode == "exact" else Sampled(args.samples, args.seed)


def cmd_formula_eval(args, cfg, rep):
    from .formula import evaluate, parse_formula, to_text
    ast = parse_formula(_formula_text(args))
    g = _formula_group(args.group, cfg.caps)
    r = evaluate(ast, g, {}, _mode(args), caps=cfg.caps)
    rep.line(formula=to_text(ast).replace(" ", ""), group=args.group)
    rep.line(value=r.value, bound=r.bound, evaluations=r.evaluations)


def cmd_formula_series(args, cfg, rep):
    from .formula import parse_formula, sentence_series
    ast = parse_formula(_formula_text(args))
    res = sentence_series(ast, _int_range(args.degrees), _mode(args), caps=cfg.caps)
    for (n, v), b in zip(res["values"], res["bounds"]):
        rep.row(n=n, value=v, bound=b)
    rep.line(values=[v for _, v in res["values"]], differences=res["differences"])


# -- rank functions ------------------------------------------------------------------------------

def _parse_field_matrix(text: str, p: int):
    from .rankalg import PrimeFieldMatrix
    rows = [[int(t) for t in r.split()] for r in text.replace("\n", ";").split(";") if r.strip()]
    return PrimeFieldMatrix(p, np.array(rows, dtype=np.int64))


def cmd_rank(args, cfg, rep):
    from .rankalg import normalized_rank, perm_rank_identity
    if args.perm:
        lhs, rhs, eq = perm_rank_identity(_perm(args.perm), args.p)
        rep.line(lhs=lhs, rhs=rhs)
        rep.check("equal", eq)
        return
    text = args.matrix if args.matrix else _read_in(args)
    m = _parse_field_matrix(text, args.p)
    r = normalized_rank(m)
    rep.line(n=m.n, p=m.p, rank=r * m.n, normalized=r)


def cmd_rank_probe(args, cfg, rep):
    from .rankalg import PrimeFieldMatrix, finite_rank_ring_probe, rank_lower_bound_probe
    if args.perms:
        perms = _perm_list(args.perms)
        lambdas = [int(t) for t in args.lambdas.split(",")] if args.lambdas else [1] * len(perms)
        r = rank_lower_bound_probe(perms, lambdas, args.p)
        rep.line(value=r.value, bound=r.bound, eps=r.eps, slack=r.slack, separation=r.separation,
                 pair_bound=r.pair_bound, witness=r.witness)
        rep.check("holds", r.holds)
        return
    rng = np.random.default_rng(cfg.seed)
    primes = [int(t) for t in args.primes.split(",")]
    fails, witness_ok, min_slack = 0, True, None
    first_fail = None
    for t in range(args.instances):
        k = int(rng.integers(1, args.kmax + 1))
        n = int(rng.integers(1, args.nmax + 1))
        p = primes[int(rng.integers(len(primes)))]
        perms = [Permutation.random(n, rng) for _ in range(k)]
        lambdas = [int(v) for v in rng.integers(1, p, size=k)]
        r = rank_lower_bound_probe(perms, lambdas, p)
        witness_ok = witness_ok and r.value >= r.witness >= r.pair_bound
        if min_slack is None or r.slack < min_slack:
            min_slack = r.slack
        if not r.holds:
            fails += 1
            if first_fail is None:
                first_fail = t
    rep.line(instances=args.instances, failures=fails, min_slack=min_slack, first_failure=first_fail)
    rep.check("witness_chain", witness_ok)
    worst = finite_rank_ring_probe([
        (PrimeFieldMatrix.random(args.dim, args.ring_p, rng),
         PrimeFieldMatrix.random(args.dim, args.ring_p, rng))
        for _ in range(args.ring_pairs)])
    rep.line(ring_pairs=args.ring_pairs, ring_max_discrepancy=worst)
    rep.check("ring_holds", worst == 0)
    rep.check("bound_holds", fails == 0)


def cmd_galg_check(args, cfg, rep):
    from .rankalg import (GroupAlgebraElement, averaging_idempotent, frobenius_trace_check,
                          idempotent_trace_check, parse_group_algebra, subgroups)
    if args.infile:
        e = parse_group_algebra(_read_in(args), lambda ref: _group(ref, cfg.caps))
        try:
            r = idempotent_trace_check(e)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rep.line(traces=r.traces)
        for name, ok in r.checks:
            rep.row(check=name.replace(" ", ""), ok=ok)
        rep.check("idempotent_ok", r.ok)
        return
    g = _group(args.group, cfg.caps)
    rng = np.random.default_rng(cfg.seed)
    fro_ok = True
    for _ in range(args.pairs):
        a = GroupAlgebraElement.random(g, args.p, rng)
        b = GroupAlgebraElement.random(g, args.p, rng)
        fro_ok = fro_ok and frobenius_trace_check(a, b).ok
    idem_ok, count = True, 0
    for H in subgroups(g):
        if len(H) % args.p == 0:
            continue
        count += 1
        idem_ok = idem_ok and idempotent_trace_check(averaging_idempotent(g, H, args.p)).ok
    rep.line(group=g.name, p=args.p, pairs=args.pairs, idempotents=count)
    rep.check("frobenius_ok", fro_ok)
    rep.check("idempotent_ok", idem_ok)


# -- entropy --------------------------------------------------------------------------------------

def _subshift(args):
    if getattr(args, "infile", None):
        return ent.parse_subshift(_read_in(args))
    try:
        return ent.BUILTIN_SHIFTS[args.shift]()
    except KeyError:
        raise UsageError(f"unknown shift {args.shift!r}; choose from {sorted(ent.BUILTIN_SHIFTS)}") from None


def cmd_entropy(args, cfg, rep):
    Y = _subshift(args)
    est = ent.h_estimate(Y, args.nmax, caps=cfg.caps)
    for n in range(1, args.nmax + 1):
        rep.row(n=n, count=est.counts[n], value=est.values[n - 1], running=est.running[n - 1])
    rep.line(estimate=est.estimate, argmin=est.argmin, ratio_estimate=est.ratio_estimate)
    if args.bound:
        m, N = (int(t) for t in args.bound.split(","))
        b = ent.amenable_bound_check(Y, m, N, caps=cfg.caps)
        rep.line(bound_lhs=b.lhs, bound_rhs=b.rhs, vacuous=b.vacuous)
        if not b.vacuous:
            rep.check("bound_holds", b.holds)


def cmd_tiling(args, cfg, rep):
    d = args.dim
    E = ent.box((args.m,) * d)
    F = ent.box((args.N,) * d)
    r = ent.greedy_tiling(E, F)
    rep.line(tiles=len(r.tiles), density=r.density, bound=r.bound, boundary=r.boundary_size)
    rep.check("disjoint", r.disjoint)
    rep.check("covers_interior", r.covers_interior)
    rep.check("holds", r.holds)


def cmd_sofic_entropy(args, cfg, rep):
    Y = _subshift(args)
    f, mask = Y.window_oracle(args.window)
    perms = ent.cyclic_sofic_map(range(f), args.n)
    r = ent.sofic_entropy_count(perms, Y.k, mask, Fraction(args.delta), caps=cfg.caps)
    rep.line(n=r.n, count=r.count, full=Y.k ** r.n, rate=r.rate, exact=r.exact)


# -- stability ------------------------------------------------------------------------------------

def _tuple_text(t) -> str:
    """Compact single-token form, accepted back by --tuple."""
    return "|".join(f"{s.n}:" + ",".join(str(int(i)) for i in s.images) for s in t)


def cmd_stability_search(args, cfg, rep):
    from .stability import search_approximate
    p = _presentation(args)
    res = search_approximate(p, args.n, args.method, seed=cfg.seed, workers=cfg.workers,
                             restarts=args.restarts, steps=args.steps, trials=args.trials,
                             caps=cfg.caps)
    params = " ".join(f"{k}={_fmt(v)}" for k, v in res.params.items())
    rep.line(presentation=p.name or "custom", n=args.n, method=res.method)
    if params:
        rep.text(params)
    rep.line(defect=res.best.defect, evaluations=res.evaluations)
    rep.line(tuple=_tuple_text(res.best.perms))


def cmd_exact_scan(args, cfg, rep):
    from .stability import exact_scan, verify_solution
    p = _presentation(args)
    target = _group(args.group, cfg.caps) if args.group else args.n
    res = exact_scan(p, target, workers=cfg.workers, caps=cfg.caps)
    rep.line(solutions=len(res.solutions), trivial=res.trivial_only, nodes=res.nodes)
    if args.list:
        for sol in res.solutions:
            rep.row(solution=",".join("_".join(res.group.names[i].split()) for i in sol))
    if not args.group:
        rep.check("verified", all(verify_solution(p, t) for t in res.perms()))


def cmd_higman_scan(args, cfg, rep):
    from .stability import exact_scan, higman
    res = exact_scan(higman(), args.n, workers=cfg.workers, caps=cfg.caps)
    rep.line(solutions=len(res.solutions), trivial=res.trivial_only)
    rep.ok = rep.ok and res.trivial_only


def _read_tuple(args) -> list[Permutation]:
    if args.tuple:
        return _perm_list(args.tuple)
    return [_perm(ln) for ln in _read_in(args).splitlines() if ln.strip()]


def cmd_nearest_exact(args, cfg, rep):
    from .stability import nearest_exact, presentation_defect
    p = _presentation(args)
    t = _read_tuple(args)
    r = nearest_exact(p, t, args.mode, workers=cfg.workers, caps=cfg.caps)
    rep.line(defect=presentation_defect(p, t), candidates=r.candidates)
    if r.solution is None:
        rep.line(found=False)
        return
    rep.line(found=True, distance=r.distance)
    rep.line(solution=_tuple_text(r.solution))


def cmd_stability_profile(args, cfg, rep):
    from .stability import stability_profile
    p = _presentation(args)
    rows = stability_profile(p, args.n, args.trials, _fraction_list(args.deltas), seed=cfg.seed,
                             planted=not args.search, nearest_mode=args.nearest,
                             workers=cfg.workers, steps=args.steps, caps=cfg.caps)
    ok = True
    for r in rows:
        rep.row(delta=r.delta, trial=r.trial, achieved=r.achieved, epsilon=r.epsilon,
                planted=r.planted, reached=r.reached)
        if r.planted is not None and r.epsilon is not None:
            ok = ok and r.epsilon <= r.planted
    rep.line(rows=len(rows), max_epsilon=max((r.epsilon for r in rows if r.epsilon is not None), default=None))
    if not args.search:
        rep.check("witness_holds", ok)


def cmd_contractive_check(args, cfg, rep):
    from .stability import commutator_contractive_suite
    g = _group(args.group, cfg.caps)
    if args.tuple:
        try:
            tup = [g.index(t.strip()) for t in args.tuple.split(",")]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        tup = [int(g.identity())] * 4
    r = commutator_contractive_suite(g, tup, Fraction(args.eps), caps=cfg.caps)
    if not r.axioms_ok:
        for msg in r.messages:
            rep.row(violation=msg.replace(" ", "_"))
        rep.check("axioms_ok", False)
        return
    rep.line(group=g.name, pairs=r.pairs, violations=r.violations)
    if r.worst_pair:
        rep.line(worst_pair="(" + ";".join(x.replace(" ", "_") for x in r.worst_pair) + ")")
    rep.line(relator_defects=list(r.relator_defects), premise=r.premise, conclusion=r.conclusion)
    rep.check("contractive", r.contractive)
    if r.conclusion is not None:
        rep.ok = rep.ok and r.conclusion


# -- parser ----------------------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--seed", type=int, default=0, help="root seed for every random choice")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--cap-enum", type=int, default=None, help="elements enumerated per quantifier or scan")
    c.add_argument("--cap-work", type=int, default=None, help="total work of nested enumerations")
    c.add_argument("--format", choices=("human", "record"), default="human")
    c.add_argument("--in", dest="infile", default=None, help="input file in the subcommand's format")
    return c


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soficlab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    common = _common()

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("length", cmd_length, "Hamming, table or Hilbert-Schmidt length")
    sp.add_argument("--perm")
    sp.add_argument("--group")
    sp.add_argument("--element")

    sp = add("amplify", cmd_amplify, "tensor power of a permutation or unitary")
    sp.add_argument("--perm")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--print", action="store_true")

    sp = add("embed", cmd_embed, "block embedding of a permutation")
    sp.add_argument("--perm", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--print", action="store_true")

    sp = add("morphism-defect", cmd_morphism_defect, "defects of a morphism file")
    sp.add_argument("--model")

    sp = add("folner", cmd_folner, "translation morphism of a lattice box")
    sp.add_argument("--box", default="10", help="box shape, e.g. 10 or 5,5")
    sp.add_argument("--F", help="vectors, e.g. '1;2' or '1,0;0,1'")
    sp.add_argument("--out")

    for name, fn, h in (("nice-repair", cmd_nice_repair, "doubling repair to a nice morphism"),
                        ("to-unitary", cmd_to_unitary, "compose with permutation matrices")):
        sp = add(name, fn, h)
        sp.add_argument("--model")
        sp.add_argument("--group", help="use the regular representation of a named group")
        if name == "nice-repair":
            sp.add_argument("--out")

    sp = add("free-product", cmd_free_product, "free product of two regular representations")
    sp.add_argument("--g0", default="C2")
    sp.add_argument("--g1", default="C2")
    sp.add_argument("--N", type=int, default=2)

    for name, fn, h in (("formula-eval", cmd_formula_eval, "evaluate a formula in a group"),
                        ("formula-series", cmd_formula_series, "sentence values along S_n")):
        sp = add(name, fn, h)
        sp.add_argument("--formula")
        sp.add_argument("--mode", choices=("exact", "sampled"), default="exact")
        sp.add_argument("--samples", type=int, default=64)
        if name == "formula-eval":
            sp.add_argument("--group", default="S3")
        else:
            sp.add_argument("--degrees", default="2..5")

    sp = add("rank", cmd_rank, "normalized rank over F_p")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--perm")
    sp.add_argument("--matrix", help="rows separated by ';'")

    sp = add("rank-probe", cmd_rank_probe, "rank lower bound and finite rank ring probes")
    sp.add_argument("--perms", help="permutations separated by '|'")
    sp.add_argument("--lambdas")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--instances", type=int, default=1000)
    sp.add_argument("--kmax", type=int, default=4)
    sp.add_argument("--nmax", type=int, default=10)
    sp.add_argument("--primes", default="2,3")
    sp.add_argument("--ring-pairs", type=int, default=500)
    sp.add_argument("--ring-p", type=int, default=3)
    sp.add_argument("--dim", type=int, default=5)

    sp = add("galg-check", cmd_galg_check, "trace identities in F_p[G]")
    sp.add_argument("--group", default="S3")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--pairs", type=int, default=200)

    for name, fn, h in (("entropy", cmd_entropy, "word counts and entropy estimate"),
                        ("sofic-entropy", cmd_sofic_entropy, "coloring count along the cyclic sofic map")):
        sp = add(name, fn, h)
        sp.add_argument("--shift", default="golden")
        if name == "entropy":
            sp.add_argument("--nmax", type=int, default=12)
            sp.add_argument("--bound", help="m,N: amenable bound with E=[0,m), F=[0,N)")
        else:
            sp.add_argument("--n", type=int, default=10)
            sp.add_argument("--delta", default="0")
            sp.add_argument("--window", type=int, default=None)

    sp = add("tiling", cmd_tiling, "greedy tiling of a box by a box")
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--N", type=int, default=30)
    sp.add_argument("--dim", type=int, default=1)

    def pres(sp):
        sp.add_argument("--presentation", default="commutator",
                        help="higman, thompsonF, commutator or bs(m,n); --in reads a file")

    sp = add("stability-search", cmd_stability_search, "minimise the defect in S_n")
    pres(sp)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--method", choices=("exhaustive", "anneal", "random"), default="anneal")
    sp.add_argument("--restarts", type=int, default=4)
    sp.add_argument("--steps", type=int, default=10_000)
    sp.add_argument("--trials", type=int, default=1000)

    sp = add("exact-scan", cmd_exact_scan, "all exact solutions in S_n or a group")
    pres(sp)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--group")
    sp.add_argument("--list", action="store_true")

    sp = add("nearest-exact", cmd_nearest_exact, "distance to the closest exact solution")
    pres(sp)
    sp.add_argument("--tuple", help="permutations separated by '|'")
    sp.add_argument("--mode", choices=("exhaustive", "local"), default="exhaustive")

    sp = add("stability-profile", cmd_stability_profile, "empirical (delta, epsilon) table")
    pres(sp)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--deltas", default="0,1/4,1/2")
    sp.add_argument("--search", action="store_true", help="anneal instead of planting")
    sp.add_argument("--steps", type=int, default=2000)
    sp.add_argument("--nearest", choices=("exhaustive", "local"), default="exhaustive")

    sp = add("higman-scan", cmd_higman_scan, "exact Higman solutions in S_n")
    sp.add_argument("--n", type=int, default=4)

    sp = add("polar", cmd_polar, "polar repair of near-unitaries")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--noise", type=float, default=0.02)
    sp.add_argument("--print", action="store_true")

    sp = add("microstate", cmd_microstate, "trace defect of a matrix tuple")
    sp.add_argument("--gamma", choices=("Z", "free", "trivial"), default="Z")
    sp.add_argument("--phi", choices=("cycle", "identity"), default="cycle")
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--word-len", type=int, default=3)

    sp = add("contractive-check", cmd_contractive_check, "commutator-contractive length suite")
    sp.add_argument("--group", default="Q8:op")
    sp.add_argument("--tuple", help="four element names separated by ','")
    sp.add_argument("--eps", default="1/200")
    return parser


def run(argv: Sequence[str] | None = None, stream=None) -> int:
    parser = build_parser()
    err = sys.stderr
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        parser.print_usage(err)
        return 2
    if args.workers < 1:
        err.write("error: --workers must be positive\n")
        return 2
    caps = Caps(**{**Caps().as_dict(),
                   **({"enum": args.cap_enum} if args.cap_enum else {}),
                   **({"work": args.cap_work} if args.cap_work else {})})
    cfg = RunConfig(seed=args.seed, workers=args.workers, caps=caps, output=args.format)
    rep = Report(args.command, cfg, stream)
    rep.header()
    try:
        args.func(args, cfg, rep)
    except (UsageError, CapExceeded, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except AssertionError as exc:
        err.write(f"assertion failed: {exc}\n")
        return 1
    rep.footer()
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
