"""Self-checks run by ``dfamin verify``.

Each suite returns a list of :class:`Check` records.  The measured values
are kept alongside the verdict so callers can apply or report tolerances.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .automata import BudgetExceeded, Dfa, is_isomorphic
from .brzozowski import brzozowski_minimize
from .experiments import longest_runs
from .hopcroft import hopcroft_minimize
from .moore import moore_minimize
from .oracle import FinalSetAnalysis, all_dfas, count_by_enumeration, enumerate_structures, tablefill_minimize
from .randgen import SamplerConfig, count_structures, sample_dfa, sample_structure, sample_unary, stream

SUITES = ("oracles", "counts", "uniformity", "nbrf", "witness", "longestrun")

CHI2_ALPHA = 0.001
ORACLE_BRZOZOWSKI_CAP = 1 << 11


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    values: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


# -- minimizer agreement --------------------------------------------------------------------

@dataclass
class AgreementTally:
    instances: int = 0
    mismatches: int = 0
    brzozowski_skipped: int = 0
    first_mismatch: Dfa | None = None

    def compare(self, dfa: Dfa, cap: int) -> None:
        self.instances += 1
        outs = [moore_minimize(dfa).minimal, hopcroft_minimize(dfa).minimal, tablefill_minimize(dfa).minimal]
        try:
            outs.append(brzozowski_minimize(dfa, cap).minimal)
        except BudgetExceeded:
            self.brzozowski_skipped += 1
        if not all(is_isomorphic(outs[0], o) for o in outs[1:]):
            self.mismatches += 1
            if self.first_mismatch is None:
                self.first_mismatch = dfa


def oracle_instance(seed: int, index: int, max_n: int = 64, k: int = 2) -> Dfa:
    """Random automaton number ``index`` of the agreement sweep; ``n`` uniform on ``1..max_n``."""
    rng = stream(seed, 1, index)
    n = int(rng.integers(1, max_n + 1))
    return sample_dfa(n, k, rng)


def exhaustive_agreement(max_n: int = 3, k: int = 2) -> AgreementTally:
    tally = AgreementTally()
    for n in range(1, max_n + 1):
        for ts in enumerate_structures(n, k):
            for dfa in all_dfas(ts):
                tally.compare(dfa, cap=1 << 20)
    return tally


def random_agreement(seed: int, count: int, max_n: int = 64, cap: int = ORACLE_BRZOZOWSKI_CAP) -> AgreementTally:
    tally = AgreementTally()
    for i in range(count):
        tally.compare(oracle_instance(seed, i, max_n), cap)
    return tally


def check_oracles(seed: int, count: int = 10_000, cap: int = ORACLE_BRZOZOWSKI_CAP) -> list[Check]:
    out = []
    ex = exhaustive_agreement()
    out.append(Check("oracles/exhaustive", ex.mismatches == 0 and ex.brzozowski_skipped == 0,
                     f"{ex.instances} automata (n<=3, k=2), {ex.mismatches} mismatches",
                     {"instances": ex.instances, "mismatches": ex.mismatches}))
    rnd = random_agreement(seed, count, cap=cap)
    out.append(Check("oracles/random", rnd.mismatches == 0,
                     f"{rnd.instances} automata (n<=64, k=2), {rnd.mismatches} mismatches, "
                     f"brzozowski over budget ({cap} subsets) on {rnd.brzozowski_skipped}",
                     {"instances": rnd.instances, "mismatches": rnd.mismatches,
                      "brzozowski_skipped": rnd.brzozowski_skipped}))
    return out


# -- counting -------------------------------------------------------------------------------

def check_counts(max_unary: int = 8) -> list[Check]:
    cases = [(2, 2, 12), (3, 1, 3)] + [(n, 1, n) for n in range(1, max_unary + 1)]
    bad = []
    for n, k, expected in cases:
        got, enum = count_structures(n, k), count_by_enumeration(n, k)
        if not got == enum == expected:
            bad.append(f"({n},{k}): table {got}, enumeration {enum}, expected {expected}")
    return [Check("counts", not bad, "; ".join(bad) or f"{len(cases)} counts exact")]


# -- sampler uniformity ---------------------------------------------------------------------

def chi_square(observed: np.ndarray) -> tuple[float, float]:
    """Statistic against the uniform law and its critical value at ``CHI2_ALPHA``."""
    statistic = float(stats.chisquare(observed).statistic)
    return statistic, float(stats.chi2.ppf(1 - CHI2_ALPHA, observed.size - 1))


def structure_histogram(n: int, k: int, samples: int, seed: int) -> np.ndarray:
    index = {ts: i for i, ts in enumerate(enumerate_structures(n, k))}
    rng = stream(seed, 2, n, k)
    config = SamplerConfig(seed=seed, mode="exact", exact_threshold=max(n, 1))
    hist = np.zeros(len(index), dtype=np.int64)
    for _ in range(samples):
        hist[index[sample_structure(n, k, rng, config)]] += 1
    return hist


def unary_histogram(n: int, samples: int, seed: int) -> np.ndarray:
    rng = stream(seed, 3, n)
    hist = Counter()
    for _ in range(samples):
        dfa = sample_unary(n, rng)
        mask = sum(1 << s for s in dfa.finals)
        hist[int(dfa.table[n - 1, 0]) * (1 << n) + mask] += 1
    return np.array([hist[i] for i in range(n << n)], dtype=np.int64)


def check_uniformity(seed: int, samples_22: int = 12_000, samples_unary: int = 64_000) -> list[Check]:
    out = []
    s1, c1 = chi_square(structure_histogram(2, 2, samples_22, seed))
    out.append(Check("uniformity/(2,2)", s1 < 31.26, f"chi2={s1:.2f} < 31.26 (11 df)",
                     {"statistic": s1, "critical": 31.26}))
    s2, c2 = chi_square(unary_histogram(4, samples_unary, seed))
    out.append(Check("uniformity/unary4", s2 < c2, f"chi2={s2:.2f} < {c2:.2f} (63 df)",
                     {"statistic": s2, "critical": c2}))
    return out


# -- F_ell bounds and witnesses ---------------------------------------------------------------

def final_set_sample(seed: int, n: int, count: int, k: int = 2) -> list:
    return [sample_structure(n, k, stream(seed, 4, n, i)) for i in range(count)]


@dataclass
class NbrfTally:
    structures: int = 0
    f_ell_violations: int = 0
    ge_ell_violations: int = 0
    covering_violations: int = 0
    max_f_ell: dict = field(default_factory=dict)


def nbrf_sweep(structures) -> NbrfTally:
    tally = NbrfTally()
    for ts in structures:
        n = ts.n
        fa = FinalSetAnalysis(ts)
        tally.structures += 1
        for ell in range(1, n):
            bound = 2 ** (n - ell)
            for quad in fa.quadruples():
                size = fa.f_ell_masks(ell, *quad).size
                tally.max_f_ell[ell] = max(tally.max_f_ell.get(ell, 0), size)
                tally.f_ell_violations += size > bound
            ge = fa.moore_ge_ell_masks(ell)
            tally.ge_ell_violations += ge.size > n ** 4 * bound
            union = fa.union_f_ell_masks(ell)
            tally.covering_violations += not np.array_equal(ge, union)
    return tally


def check_nbrf(seed: int, count: int = 25, n: int = 5) -> list[Check]:
    t = nbrf_sweep(final_set_sample(seed, n, count))
    ok = t.f_ell_violations == t.ge_ell_violations == t.covering_violations == 0
    detail = (f"{t.structures} structures at n={n}: |F_l| bound violations {t.f_ell_violations}, "
              f"|F>=l| bound violations {t.ge_ell_violations}, covering mismatches {t.covering_violations}")
    return [Check("nbrf", ok, detail, {"tally": t})]


@dataclass
class WitnessTally:
    witnesses: int = 0
    wrong_size: int = 0
    cyclic: int = 0
    invalid_edges: int = 0
    missing: int = 0


def witness_sweep(structures) -> WitnessTally:
    tally = WitnessTally()
    for ts in structures:
        fa = FinalSetAnalysis(ts)
        for ell in range(1, ts.n):
            for quad in fa.quadruples():
                if fa.f_ell_masks(ell, *quad).size == 0:
                    continue
                w = fa.acyclic_witness(ell, *quad)
                if w is None:
                    tally.missing += 1
                    continue
                tally.witnesses += 1
                tally.wrong_size += w.edge_count != ell
                tally.cyclic += w.has_cycle() or w.has_self_loop
                tally.invalid_edges += not w.is_subgraph_of(fa.dependency_graph(ell, *quad))
    return tally


def check_witness(seed: int, count_5: int = 25, count_6: int = 100) -> list[Check]:
    structures = final_set_sample(seed, 5, count_5) + final_set_sample(seed, 6, count_6)
    t = witness_sweep(structures)
    ok = t.wrong_size == t.cyclic == t.invalid_edges == t.missing == 0
    detail = (f"{t.witnesses} witnesses: wrong size {t.wrong_size}, cyclic {t.cyclic}, "
              f"invalid edges {t.invalid_edges}, missing {t.missing}")
    return [Check("witness", ok, detail, {"tally": t})]


# -- longest runs ------------------------------------------------------------------------------

def check_longest_run(seed: int, samples: int = 100_000, small_samples: int = 100_000) -> list[Check]:
    n = 1 << 16
    runs = longest_runs(n, samples, seed)
    errors = {}
    for h in (-1, 0, 1, 2):
        empirical = float(np.mean(runs < math.floor(math.log2(n) + h)))
        errors[h] = abs(empirical - math.exp(-2.0 ** (-h - 1)))
    worst = max(errors.values())
    out = [Check("longestrun/law", worst <= 0.03, f"max |empirical - predicted| = {worst:.4f} <= 0.03",
                 {"errors": errors})]
    m = 1 << 10
    small = longest_runs(m, small_samples, seed)
    p = float(np.mean(small < math.floor(0.5 * math.log2(m))))
    bound = math.exp(-math.sqrt(m) / 2) + 0.001
    out.append(Check("longestrun/short", p <= bound, f"P(run < 5) = {p:.5f} <= {bound:.5f} at n=1024",
                     {"probability": p, "bound": bound}))
    return out


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name == "all":
        return [c for s in SUITES for c in run_suite(s, seed)]
    runners = {
        "oracles": lambda: check_oracles(seed),
        "counts": check_counts,
        "uniformity": lambda: check_uniformity(seed),
        "nbrf": lambda: check_nbrf(seed),
        "witness": lambda: check_witness(seed),
        "longestrun": lambda: check_longest_run(seed),
    }
    if name not in runners:
        raise ValueError(f"unknown suite {name!r}")
    start = time.perf_counter()
    checks = runners[name]()
    for c in checks:
        c.values.setdefault("seconds", time.perf_counter() - start)
    return checks
