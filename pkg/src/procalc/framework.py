"""Corpus-scale checks of translation correctness.

A translation maps source terms (open or closed) to target terms.  The checks
here sample the universally quantified correctness notions on finite corpora:
every report says how many terms or samples it covered and is evidence, not
proof.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import ccs, csp
from .actions import Name, Relabelling
from .corpus import DEFAULT_ALPHABET, Corpus, TermGenerator, mutants, punch_holes
from .encoding import TripledAlphabet, encode
from .equivalence import REFINES, Relation, check, finer_than
from .languages import CCS, CSP, Language, get_language
from .lts import DEFAULT_MAX_STATES, ProcessGraph, explore
from .terms import Term, Var, alpha_eq, alpha_id, apply_subst, head_of


class NotFvrError(ValueError):
    """A translation introduced free variables into a closed term."""


# -- translations ---------------------------------------------------------------------


@dataclass(frozen=True)
class TranslationDef:
    """A named translation from ``source`` terms to ``target`` terms.

    ``translate`` must be picklable (a module-level function, a partial of
    one, or an instance of a module-level class) for parallel runs.
    """

    name: str
    source: Language
    target: Language
    translate: Callable[[Term], Term]
    description: str = ""

    def __call__(self, e: Term) -> Term:
        return self.translate(e)

    def context(self, template: Term) -> Term:
        """The target context ``T(f(X1, ..., Xn))`` for an operator template."""
        return self.translate(template)


def _identity(e: Term) -> Term:
    return e


def identity_translation(lang: Language | str) -> TranslationDef:
    lang = get_language(lang)
    return TranslationDef(f"identity-{lang.name}", lang, lang, _identity, "every term maps to itself")


def encoding_translation(alphabet: Iterable[str] = DEFAULT_ALPHABET) -> TranslationDef:
    tri = TripledAlphabet.of(alphabet)
    names = ",".join(str(a) for a in tri.sorted_base)
    return TranslationDef("encode", CSP, CCS, partial(encode, alphabet=tri), f"CSP to CCS over {{{names}}}")


class ByHeads:
    """Translate by head decomposition: ``T(E) = clause(H)[T o sigma]`` where
    ``E = H[sigma]`` and ``H`` is the canonical head of ``E``.

    ``overrides`` maps an operator symbol to a clause used instead of ``base``
    for heads with that symbol.
    """

    def __init__(self, base: Callable[[Term], Term], overrides: Optional[dict] = None):
        self.base = base
        self.overrides = dict(overrides or {})

    def __call__(self, e: Term) -> Term:
        if isinstance(e, Var):
            return e
        head, sigma = head_of(e)
        clause = self.overrides.get(head.symbol, self.base)
        return apply_subst(clause(head), {x: self(s) for x, s in sigma.items()})


def compositionalize(t0: TranslationDef | Callable[[Term], Term], source: Language | str | None = None,
                     target: Language | str | None = None, name: Optional[str] = None) -> TranslationDef:
    """The compositional translation induced by ``t0`` on canonical heads."""
    if isinstance(t0, TranslationDef):
        fn, source, target = t0.translate, source or t0.source, target or t0.target
        name = name or f"compositional-{t0.name}"
    else:
        fn = t0
        if source is None or target is None:
            raise ValueError("source and target languages are needed for a bare function")
        name = name or "compositional"
    return TranslationDef(name, get_language(source), get_language(target), ByHeads(fn),
                          "induced by head decomposition")


def _first_operand(head: Term) -> Term:
    return head.args[0]


def broken_choice_encoding(alphabet: Iterable[str] = DEFAULT_ALPHABET) -> TranslationDef:
    """The CSP encoding with internal choice translated to its left operand only."""
    tri = TripledAlphabet.of(alphabet)
    fn = ByHeads(partial(encode, alphabet=tri), {csp.INT: _first_operand})
    return TranslationDef("encode-broken-int", CSP, CCS, fn, "internal choice keeps only its left operand")


class _FillStray:
    def __init__(self, inner: Callable[[Term], Term], q: Term):
        self.inner = inner
        self.q = q

    def __call__(self, e: Term) -> Term:
        out = self.inner(e)
        stray = out.free_vars - e.free_vars
        if not stray:
            return out
        return apply_subst(out, {z: self.q for z in stray})


def make_fvr(t: TranslationDef, q: Term) -> TranslationDef:
    """Replace every free variable of ``T(E)`` not free in ``E`` by the closed term ``q``."""
    if not q.closed:
        raise ValueError("the filler term must be closed")
    return TranslationDef(f"{t.name}-fvr", t.source, t.target, _FillStray(t.translate, q), t.description)


class _Composite:
    def __init__(self, outer: Callable, inner: Callable):
        self.outer = outer
        self.inner = inner

    def __call__(self, e: Term) -> Term:
        return self.outer(self.inner(e))


def compose_translations(t2: TranslationDef, t1: TranslationDef) -> TranslationDef:
    """``t2`` after ``t1``."""
    if t1.target.name != t2.source.name:
        raise ValueError(f"cannot compose: {t1.name} yields {t1.target} but {t2.name} reads {t2.source}")
    return TranslationDef(f"{t2.name}.{t1.name}", t1.source, t2.target, _Composite(t2.translate, t1.translate))


TRANSLATIONS = {
    "encode": encoding_translation,
    "identity": identity_translation,
    "encode-broken-int": broken_choice_encoding,
}


# -- reports -----------------------------------------------------------------------


@dataclass
class TermResult:
    index: int
    term: str
    relation: str
    status: str  # pass, fail, capped or error
    evidence: str = ""
    states: tuple = (0, 0)
    seconds: float = 0.0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def line(self, timings: bool = False) -> str:
        out = f"[{self.index:03d}] {self.status.upper():<6} {self.term}"
        if self.states != (0, 0):
            out += f"  states={self.states[0]}/{self.states[1]}"
        if self.detail:
            out += f"  ({self.detail})"
        if self.evidence:
            out += f"\n      evidence: {self.evidence}"
        if timings:
            out += f"  [{self.seconds:.3f}s]"
        return out


@dataclass
class Report:
    title: str
    results: list[TermResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    children: list["Report"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results) and all(c.passed for c in self.children)

    @property
    def failures(self) -> list[TermResult]:
        return [r for r in self.results if r.status == "fail"]

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "capped": 0, "error": 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def header(self) -> str:
        return f"== {self.title}"

    def footer(self) -> str:
        c = self.counts()
        verdict = "PASS" if self.passed else "FAIL"
        if not self.results and self.children:
            return f"{verdict}: {sum(c.passed for c in self.children)} of {len(self.children)} parts pass"
        body = f"{verdict}: checked on {len(self.results)} items: {c['pass']} pass, {c['fail']} fail"
        if c["capped"] or c["error"]:
            body += f", {c['capped']} capped, {c['error']} error"
        return body

    def lines(self, timings: bool = False) -> Iterator[str]:
        yield self.header()
        for r in self.results:
            yield r.line(timings)
        for n in self.notes:
            yield f"note: {n}"
        for child in self.children:
            yield from child.lines(timings)
        yield self.footer()

    def render(self, timings: bool = False) -> str:
        return "\n".join(self.lines(timings)) + "\n"

    def summary(self, timings: bool = False) -> dict:
        def rec(r: TermResult) -> dict:
            d = asdict(r)
            d["states"] = list(r.states)
            if not timings:
                d.pop("seconds")
            return d

        return {
            "title": self.title,
            "passed": self.passed,
            "counts": self.counts(),
            "notes": list(self.notes),
            "results": [rec(r) for r in self.results],
            "children": [c.summary(timings) for c in self.children],
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.summary(timings), indent=2, sort_keys=True) + "\n"


def _run(worker, tasks: list, jobs: int, on_result) -> list[TermResult]:
    """Apply ``worker`` to every task; results come back in task order."""
    results = []
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for r in pool.map(worker, tasks):
                results.append(r)
                if on_result:
                    on_result(r)
    else:
        for task in tasks:
            r = worker(task)
            results.append(r)
            if on_result:
                on_result(r)
    return results


def _explore_pair(p: Term, plang: Language, q: Term, qlang: Language, max_states: int):
    return explore(p, plang, max_states), explore(q, qlang, max_states)


# -- respects ---------------------------------------------------------------------


def _respects_one(task) -> TermResult:
    t, rel, index, p, max_states = task
    start = time.perf_counter()
    text = t.source.show(p)
    try:
        q = t(p)
    except Exception as exc:  # a partial translation is reported per term
        return TermResult(index, text, rel.value, "error", f"translation failed: {exc}")
    if not q.closed:
        raise NotFvrError(f"{t.name} introduces free variables {sorted(q.free_vars)} on {text}")
    g1, g2 = _explore_pair(p, t.source, q, t.target, max_states)
    states = (g1.num_states, g2.num_states)
    if not (g1.complete and g2.complete):
        return TermResult(index, text, rel.value, "capped", f"state cap {max_states} reached", states,
                          time.perf_counter() - start)
    v = check(rel, g1, g2)
    status = "pass" if v.holds else "fail"
    evidence = "" if v.holds else v.describe_evidence()
    return TermResult(index, text, rel.value, status, evidence, states, time.perf_counter() - start)


def check_respects(
    t: TranslationDef,
    rel: Relation | str,
    corpus: Corpus | Sequence[Term],
    max_states: int = DEFAULT_MAX_STATES,
    jobs: int = 1,
    on_result: Optional[Callable[[TermResult], None]] = None,
) -> Report:
    """Compare ``P`` with ``T(P)`` under ``rel`` for every closed corpus term."""
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    terms = list(corpus)
    tasks = [(t, rel, i, p, max_states) for i, p in enumerate(terms)]
    results = _run(_respects_one, tasks, jobs, on_result)
    report = Report(f"respects: {t.name} up to {rel.value}", results)
    report.notes.append(f"checked on {len(terms)} closed {t.source.name} terms")
    return report


# -- correct up to --------------------------------------------------------------------


class _Judge:
    """Explores and compares closed terms, caching graphs by alpha class."""

    def __init__(self, rel: Relation, max_states: int):
        self.rel = rel
        self.max_states = max_states
        self.graphs: dict = {}

    def graph(self, p: Term, lang: Language) -> ProcessGraph:
        key = (lang.name, alpha_id(p))
        g = self.graphs.get(key)
        if g is None:
            g = self.graphs[key] = explore(p, lang, self.max_states)
        return g

    def related(self, p: Term, plang: Language, q: Term, qlang: Language):
        g1, g2 = self.graph(p, plang), self.graph(q, qlang)
        if not (g1.complete and g2.complete):
            return None, (g1.num_states, g2.num_states)
        return check(self.rel, g1, g2), (g1.num_states, g2.num_states)


def _correct_one(task) -> TermResult:
    t, rel, index, p, pool, samples, seed, holes, max_states = task
    start = time.perf_counter()
    judge = _Judge(rel, max_states)
    rng = random.Random(f"{seed}:{index}")
    e, original = punch_holes(p, rng, holes)
    text = t.source.show(e)
    te = t(e)
    stray = te.free_vars - e.free_vars
    if stray:
        raise NotFvrError(f"{t.name} introduces free variables {sorted(stray)} on {text}")
    worst = (0, 0)
    kinds_used = set()
    for k in range(samples):
        rho, eta, desc = {}, {}, []
        for v in sorted(original):
            value = original[v] if k == 0 or rng.random() < 0.5 else rng.choice(pool)
            rho[v] = value
            canonical = t(value)
            verdict, st = judge.related(value, t.source, canonical, t.target)
            if verdict is None:
                return TermResult(index, text, rel.value, "capped", "state cap reached on a valuation", st,
                                  time.perf_counter() - start)
            if not verdict.holds:
                return TermResult(
                    index, text, rel.value, "fail",
                    f"closed instance {t.source.show(value)} is not related to its translation: "
                    + verdict.describe_evidence(),
                    st, time.perf_counter() - start, f"sample {k}",
                )
            chosen, kind = canonical, "T"
            if k > 0:
                options = mutants(canonical, t.target)
                kind, cand = rng.choice(options)
                verdict, _ = judge.related(value, t.source, cand, t.target)
                if verdict is not None and verdict.holds:
                    chosen = cand
                else:
                    kind = "T"
            eta[v] = chosen
            kinds_used.add(kind)
            desc.append(f"{v}:{kind}")
        lhs = apply_subst(te, eta)
        rhs = apply_subst(e, rho)
        verdict, st = judge.related(rhs, t.source, lhs, t.target)
        worst = max(worst, st)
        if verdict is None:
            return TermResult(index, text, rel.value, "capped", "state cap reached", st,
                              time.perf_counter() - start, f"sample {k}")
        if not verdict.holds:
            vals = ", ".join(f"{v}={t.source.show(rho[v])}" for v in sorted(rho))
            return TermResult(index, text, rel.value, "fail",
                              f"under {{{vals}}} with eta {' '.join(desc)}: {verdict.describe_evidence()}",
                              st, time.perf_counter() - start, f"sample {k}")
    detail = f"{samples} valuations, eta kinds {','.join(sorted(kinds_used)) or '-'}"
    return TermResult(index, text, rel.value, "pass", "", worst, time.perf_counter() - start, detail)


def check_correct_up_to(
    t: TranslationDef,
    rel: Relation | str,
    corpus: Corpus | Sequence[Term],
    valuation_samples: int = 3,
    seed: int = 0,
    holes: int = 2,
    max_states: int = DEFAULT_MAX_STATES,
    jobs: int = 1,
    on_result: Optional[Callable[[TermResult], None]] = None,
) -> Report:
    """Check ``T(E)[eta] ~ E[rho]`` on open terms cut out of the corpus.

    Holes are punched into each corpus term; the first valuation puts the cut
    subterms back, later ones draw other corpus terms.  ``eta`` is ``T o rho``
    or, when verified related to ``rho``, a mutant of it.
    """
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    terms = list(corpus)
    tasks = [(t, rel, i, p, terms, valuation_samples, seed, holes, max_states) for i, p in enumerate(terms)]
    results = _run(_correct_one, tasks, jobs, on_result)
    report = Report(f"correct: {t.name} up to {rel.value}", results)
    report.notes.append(
        f"checked on {len(terms)} open terms with {valuation_samples} valuations each; "
        "eta ranges over T o rho and verified mutants only"
    )
    report.notes.append("every source value is a closed term, so T o rho witnesses a related target value")
    return report


# -- compositional --------------------------------------------------------------------


def check_compositional(
    t: TranslationDef,
    samples: int = 200,
    seed: int = 0,
    depth: int = 3,
    variables: Sequence[str] = ("X", "Y", "Z"),
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> Report:
    """Check ``T(X) = X`` and ``T(E[sigma]) =alpha T(E)[T o sigma]`` on random samples."""
    rng = random.Random(seed)
    gen = TermGenerator(t.source, rng, alphabet, guarded=False)
    report = Report(f"compositional: {t.name}")
    bad_vars = [x for x in variables if t(Var(x)) != Var(x)]
    report.results.append(
        TermResult(0, "T(X) = X", "alpha", "fail" if bad_vars else "pass",
                   f"variables not fixed: {', '.join(bad_vars)}" if bad_vars else "")
    )
    for i in range(1, samples + 1):
        e = gen.open(depth, variables)
        sigma = {x: gen.open(rng.randint(0, 2), variables) for x in sorted(e.free_vars)}
        lhs = t(apply_subst(e, sigma))
        rhs = apply_subst(t(e), {x: t(s) for x, s in sigma.items()})
        text = t.source.show(e)
        if alpha_eq(lhs, rhs):
            report.results.append(TermResult(i, text, "alpha", "pass"))
        else:
            subst = ", ".join(f"{x}:={t.source.show(s)}" for x, s in sigma.items())
            report.results.append(TermResult(
                i, text, "alpha", "fail",
                f"sigma {{{subst}}}: T(E[sigma]) = {t.target.show(lhs)} but T(E)[T o sigma] = {t.target.show(rhs)}",
            ))
    report.notes.append(f"checked on {samples} random (E, sigma) pairs, seed {seed}")
    return report


def check_valid(
    t: TranslationDef,
    rel: Relation | str,
    corpus: Corpus | Sequence[Term],
    samples: int = 200,
    seed: int = 0,
    max_states: int = DEFAULT_MAX_STATES,
    jobs: int = 1,
) -> Report:
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    report = Report(f"valid: {t.name} up to {rel.value}")
    report.children.append(check_compositional(t, samples, seed))
    report.children.append(check_respects(t, rel, corpus, max_states, jobs))
    report.notes.append("every semantic value is the meaning of a closed term, so denotability holds by construction")
    return report


# -- congruence sampling ------------------------------------------------------------


def probe_contexts(lang: Language | str, alphabet: Sequence[str] = DEFAULT_ALPHABET) -> list[Term]:
    """One small context per operator with the hole ``X``."""
    lang = get_language(lang)
    a, b = alphabet[0], alphabet[1 % len(alphabet)]
    x = Var("X")
    if lang.name == "ccs":
        other = ccs.prefix(a, ccs.ZERO)
        return [
            ccs.choice(x, other),
            ccs.prefix(a, x),
            ccs.par(x, ccs.prefix(Name(a).bar, ccs.ZERO)),
            ccs.par(x, other),
            ccs.restrict(x, [a]),
            ccs.relabel(x, _swap(a, b)),
            ccs.fix1("R", ccs.choice(x, ccs.prefix(a, Var("R")))),
        ]
    other = csp.prefix(a, csp.STOP)
    return [
        csp.ext(x, other),
        csp.internal(x, other),
        csp.prefix(a, x),
        csp.par(x, other, [a]),
        csp.par(x, other, []),
        csp.hide(x, a),
        csp.rename(x, _swap(a, b)),
        csp.mu("R", csp.ext(x, csp.prefix(a, Var("R")))),
    ]


def _swap(a: str, b: str) -> Relabelling:
    return Relabelling.of([(Name(a), Name(b))])


def _congruence_one(task) -> TermResult:
    lang, rel, index, e, rho, kind_pref, seed, max_states = task
    start = time.perf_counter()
    rng = random.Random(f"{seed}:nu:{index}")
    judge = _Judge(rel, max_states)
    nu, desc = {}, []
    for v in sorted(rho):
        options = mutants(rho[v], lang)
        if kind_pref is not None:
            options = [o for o in options if o[0] == kind_pref] + [o for o in options if o[0] != kind_pref]
        else:
            rng.shuffle(options)
        chosen, kind = rho[v], "same"
        for k, cand in options:
            verdict, _ = judge.related(rho[v], lang, cand, lang)
            if verdict is not None and verdict.holds:
                chosen, kind = cand, k
                break
        nu[v] = chosen
        desc.append(f"{v}={lang.show(rho[v])} ({kind})")
    text = lang.show(e)
    verdict, st = judge.related(apply_subst(e, rho), lang, apply_subst(e, nu), lang)
    if verdict is None:
        return TermResult(index, text, rel.value, "capped", "state cap reached", st, time.perf_counter() - start)
    if verdict.holds:
        return TermResult(index, text, rel.value, "pass", "", st, time.perf_counter() - start, "; ".join(desc))
    return TermResult(index, text, rel.value, "fail", f"E[rho] and E[nu] differ: {verdict.describe_evidence()}",
                      st, time.perf_counter() - start, "; ".join(desc))


def check_congruence_sampled(
    lang: Language | str,
    rel: Relation | str,
    samples: int = 500,
    seed: int = 0,
    translation: Optional[TranslationDef] = None,
    depth: int = 3,
    value_depth: int = 3,
    max_states: int = DEFAULT_MAX_STATES,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
    jobs: int = 1,
) -> Report:
    """Look for contexts ``E`` and related valuations with ``E[rho]`` unrelated to ``E[nu]``.

    The first samples pair every probe context with every mutant kind, the
    rest are random.  With ``translation`` given, contexts and valuations are
    drawn from its image instead (the check then runs in the target language).
    """
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    rng = random.Random(seed)
    if translation is not None:
        lang = translation.target
        source = translation.source
    else:
        lang = source = get_language(lang)
    gen = TermGenerator(source, rng, alphabet)
    image = translation or (lambda e: e)

    probes: list[tuple[Term, Optional[str]]] = []
    if translation is None:
        kinds = [k for k, _ in mutants(Var("X"), lang)]
        probes = [(c, k) for c in probe_contexts(lang, alphabet) for k in kinds]
    else:
        kinds = [k for k, _ in mutants(Var("X"), lang)]
        probes = [(image(c), k) for c in probe_contexts(source, alphabet) for k in kinds]

    tasks = []
    for i in range(samples):
        if i < len(probes):
            e, pref = probes[i]
        else:
            e, pref = image(gen.open(depth, ("X", "Y"))), None
        rho = {v: image(gen.closed(rng.randint(1, value_depth))) for v in sorted(e.free_vars)}
        tasks.append((lang, rel, i, e, rho, pref, seed, max_states))
    results = _run(_congruence_one, tasks, jobs, None)
    where = f"image of {translation.name}" if translation else lang.name
    report = Report(f"congruence: {rel.value} on {where}", results)
    report.notes.append(f"checked on {samples} (context, valuation pair) samples, seed {seed}")
    return report


# -- relation hierarchy ----------------------------------------------------------------


def relation_profile(g1: ProcessGraph, g2: ProcessGraph) -> dict:
    return {r: check(r, g1, g2).holds for r in Relation}


def refinement_violations(profile: dict) -> list[tuple[Relation, Relation]]:
    """Declared refinements (finer, coarser) contradicted by a verdict profile."""
    return [(f, c) for f, coarser in REFINES.items() for c in coarser if profile[f] and not profile[c]]


def _hierarchy_one(task) -> TermResult:
    t, finer, coarser, index, p, max_states = task
    start = time.perf_counter()
    text = t.source.show(p)
    g1, g2 = _explore_pair(p, t.source, t(p), t.target, max_states)
    st = (g1.num_states, g2.num_states)
    label = f"{finer.value}->{coarser.value}"
    if not (g1.complete and g2.complete):
        return TermResult(index, text, label, "capped", "state cap reached", st)
    profile = relation_profile(g1, g2)
    broken = refinement_violations(profile)
    if profile[finer] and not profile[coarser]:
        broken.append((finer, coarser))
    detail = " ".join(f"{r.value}={'y' if profile[r] else 'n'}" for r in Relation)
    if broken:
        ev = "; ".join(f"{f.value} holds but {c.value} fails" for f, c in broken)
        return TermResult(index, text, label, "fail", ev, st, time.perf_counter() - start, detail)
    return TermResult(index, text, label, "pass", "", st, time.perf_counter() - start, detail)


def hierarchy_harness(
    t: TranslationDef,
    finer: Relation | str,
    coarser: Relation | str,
    corpus: Corpus | Sequence[Term],
    max_states: int = DEFAULT_MAX_STATES,
    jobs: int = 1,
) -> Report:
    """Whenever ``P`` and ``T(P)`` are related at ``finer`` they must be at ``coarser``.

    Every declared refinement is validated on the same verdict profile.
    """
    finer = Relation.parse(finer) if isinstance(finer, str) else finer
    coarser = Relation.parse(coarser) if isinstance(coarser, str) else coarser
    if not finer_than(finer, coarser):
        raise ValueError(f"{finer.value} is not declared finer than {coarser.value}")
    terms = list(corpus)
    tasks = [(t, finer, coarser, i, p, max_states) for i, p in enumerate(terms)]
    results = _run(_hierarchy_one, tasks, jobs, None)
    report = Report(f"hierarchy: {t.name}, {finer.value} implies {coarser.value}", results)
    passes_finer = sum(1 for r in results if f"{finer.value}=y" in r.detail)
    report.notes.append(f"{passes_finer} of {len(terms)} terms related at {finer.value}")
    return report


def check_composition(
    t1: TranslationDef,
    t2: TranslationDef,
    rel: Relation | str,
    corpus: Corpus | Sequence[Term],
    max_states: int = DEFAULT_MAX_STATES,
) -> Report:
    """If ``t1`` and ``t2`` both pass, their composite must pass too."""
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    terms = list(corpus)
    both = compose_translations(t2, t1)
    r1 = check_respects(t1, rel, terms, max_states)
    r2 = check_respects(t2, rel, [t1(p) for p in terms], max_states)
    r12 = check_respects(both, rel, terms, max_states)
    report = Report(f"composition: {both.name} up to {rel.value}", children=[r1, r2, r12])
    if r1.passed and r2.passed and not r12.passed:
        report.results.append(TermResult(0, both.name, rel.value, "fail",
                                         "components pass but their composite fails"))
    else:
        report.results.append(TermResult(0, both.name, rel.value, "pass"))
    return report


# -- cross-checks between notions --------------------------------------------------------


def diagnostics(
    t: TranslationDef,
    rel: Relation | str,
    corpus: Corpus | Sequence[Term],
    samples: int = 100,
    seed: int = 0,
    max_states: int = DEFAULT_MAX_STATES,
) -> Report:
    """Run the notions side by side and flag combinations that cannot all be right.

    Correctness implies respecting the relation and congruence of the
    relation on the source; validity plus congruence on the image implies
    correctness.  A flagged item means a checker bug or a sampling gap.
    """
    rel = Relation.parse(rel) if isinstance(rel, str) else rel
    terms = list(corpus)
    correct = check_correct_up_to(t, rel, terms, seed=seed, max_states=max_states)
    respects = check_respects(t, rel, terms, max_states)
    valid = check_valid(t, rel, terms, samples, seed, max_states)
    source_cong = check_congruence_sampled(t.source, rel, samples, seed, max_states=max_states)
    image_cong = check_congruence_sampled(t.target, rel, samples, seed, translation=t, max_states=max_states)
    report = Report(f"diagnostics: {t.name} up to {rel.value}",
                    children=[correct, respects, valid, source_cong, image_cong])

    def flag(i, name, bad, why):
        report.results.append(TermResult(i, name, rel.value, "fail" if bad else "pass", why if bad else ""))

    flag(0, "correct implies respects", correct.passed and not respects.passed,
         "correctness passed but a closed term is not related to its translation")
    flag(1, "correct implies source congruence", correct.passed and not source_cong.passed,
         "correctness passed yet the relation is not a congruence on the source: sampling gap")
    flag(2, "valid and image-congruent implies correct",
         valid.passed and image_cong.passed and not correct.passed,
         "validity and congruence on the image passed but correctness failed")
    return report
