"""Named verification suites; each returns a JSON-ready report with an overall ``pass``."""

from __future__ import annotations

from .analysis import C3PLUS_LOWER, theorem1_verify
from .census import census_bruteforce, census_fast, verify_lifting_identities
from .constructions import (
    BlowupSpec,
    carousel,
    carousel_class,
    is_near_regular,
    iterated_blowup,
    random_tournament,
    transitive,
)
from .core import CanonicalForm, Tournament, masks_to_bits
from .diagnostics import symmetrization_gaps
from .parallel import pmap
from .search import class_masks, exhaustive_max, max_table


def prop1_verify(n_max: int = 7, threads: int | None = 1) -> dict:
    """C3 maximisers are exactly the near-regular tournaments, n = 3..n_max."""
    rows = []
    for n in range(3, n_max + 1):
        res = exhaustive_max("C3", n, threads)
        regular = sorted(
            CanonicalForm(n, masks_to_bits(m)) for m in class_masks(n, threads) if is_near_regular(Tournament.from_masks(m))
        )
        ok = res.maximizers == regular
        rows.append({"n": n, "best_count": res.best_count, "maximizers": len(res.maximizers), "near_regular": len(regular), "pass": ok})
    return {"suite": "prop1", "rows": rows, "pass": all(r["pass"] for r in rows)}


def _lifting_random(seed: int) -> bool:
    return verify_lifting_identities(random_tournament(25, seed))


def _lifting_masks(masks) -> bool:
    return verify_lifting_identities(Tournament.from_masks(masks))


def lifting_verify(samples: int = 1000, seed: int = 0, n_max: int = 7, threads: int | None = 1) -> dict:
    """Both lifting identities, exactly, on seeded random n=25 hosts and every class with 4 <= n <= n_max."""
    rand = pmap(_lifting_random, [seed + s for s in range(samples)], threads)
    rows = [{"kind": "random", "n": 25, "checked": samples, "failures": rand.count(False)}]
    for n in range(4, n_max + 1):
        res = pmap(_lifting_masks, class_masks(n, threads), threads)
        rows.append({"kind": "enumerated", "n": n, "checked": len(res), "failures": res.count(False)})
    return {"suite": "lifting", "rows": rows, "pass": all(r["failures"] == 0 for r in rows)}


def oracle_corpus(seed: int = 0) -> list[tuple[str, Tournament]]:
    """Transitive, carousel, random, blow-up and reversed hosts for every n in 4..30."""
    corpus = []
    for n in range(4, 31):
        corpus.append((f"transitive({n})", transitive(n)))
        corpus.append((f"carousel({n})", carousel(n)))
        for s in range(3):
            corpus.append((f"random({n},{seed + s})", random_tournament(n, seed + s)))
        corpus.append((f"iterated({n},auto,{seed})", iterated_blowup(BlowupSpec(n, "auto", seed))))
        corpus.append((f"iterated({n},0.3,{seed},cutoff=2)", iterated_blowup(BlowupSpec(n, 0.3, seed, base_cutoff=2))))
        corpus.append((f"reverse(iterated({n},auto,{seed}))", iterated_blowup(BlowupSpec(n, "auto", seed)).reverse()))
    for n in (6, 8, 10):
        for k, T in enumerate(carousel_class(n)):
            corpus.append((f"carousel_class({n})[{k}]", T))
    return corpus


def _oracle_one(item) -> tuple[str, bool]:
    name, T = item
    return name, census_fast(T) == census_bruteforce(T)


def oracle_verify(seed: int = 0, threads: int | None = 1) -> dict:
    results = pmap(_oracle_one, oracle_corpus(seed), threads)
    bad = [name for name, ok in results if not ok]
    return {"suite": "oracle", "checked": len(results), "mismatches": bad, "pass": not bad and len(results) >= 200}


def monotonicity_verify(n_max: int = 8, threads: int | None = 1) -> dict:
    """Exhaustive C3+ maxima: densities non-increasing and never below the known lower bound."""
    rows = max_table("C3PLUS", range(4, n_max + 1), threads)
    dens = [r["density"] for r in rows]
    mono = all(a >= b for a, b in zip(dens, dens[1:]))
    above = all(d >= C3PLUS_LOWER for d in dens)
    out = [
        {"n": r["n"], "best_count": r["best_count"], "density": {"exact": str(r["density"]), "approx": float(r["density"])}}
        for r in rows
    ]
    return {"suite": "monotonicity", "rows": out, "non_increasing": mono, "above_lower_bound": above, "pass": mono and above}


def sym_verify(ns=(7, 8), threads: int | None = 1) -> dict:
    """No exhaustive C3+ maximiser gains from deleting one vertex and duplicating another."""
    rows = []
    for n in ns:
        res = exhaustive_max("C3PLUS", n, threads)
        gains = [symmetrization_gaps(cf.tournament())[0] for cf in res.maximizers]
        rows.append({"n": n, "maximizers": len(gains), "max_gain": max(gains), "pass": max(gains) <= 0})
    return {"suite": "sym", "rows": rows, "pass": all(r["pass"] for r in rows)}


SUITES = ("theorem1", "prop1", "lifting", "oracle", "monotonicity", "sym")


def run_suite(name: str, n_max: int | None = None, seed: int = 0, threads: int | None = 1) -> dict:
    if name == "theorem1":
        return theorem1_verify(8 if n_max is None else n_max, threads)
    if name == "prop1":
        return prop1_verify(7 if n_max is None else n_max, threads)
    if name == "lifting":
        return lifting_verify(seed=seed, n_max=7 if n_max is None else n_max, threads=threads)
    if name == "oracle":
        return oracle_verify(seed, threads)
    if name == "monotonicity":
        return monotonicity_verify(8 if n_max is None else n_max, threads)
    if name == "sym":
        return sym_verify(threads=threads)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
