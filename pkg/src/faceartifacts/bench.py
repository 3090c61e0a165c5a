"""Single-threaded benchmark of the five metrics.

Times the pure metric computation (geometry already parsed into arrays)
over a seeded random sample of faces, repeated measurements style.  Can
time the compiled and pure-Python kernel backends side by side for the
same sample.
"""

import math
import random
import time
from typing import Dict, List, Sequence

from faceartifacts.geometry import _pykernels
from faceartifacts.metrics import METRICS

try:
    from faceartifacts.geometry import _ckernels
except ImportError:
    _ckernels = None

from faceartifacts.geometry.backend import BACKEND

DEFAULT_SAMPLE = 10000
DEFAULT_REPETITIONS = 100


def available_backends() -> List[str]:
    return ["c", "python"] if _ckernels is not None else ["python"]


def _kernel_module(name: str):
    if name == "python":
        return _pykernels
    if name == "c":
        if _ckernels is None:
            raise ValueError("compiled kernels not available")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def _metric_pass(kmod, rings, metric: str) -> float:
    """One full computation of ``metric`` over all rings; returns a checksum."""
    acc = 0.0
    if metric == "cc":
        for xs, ys in rings:
            a = abs(kmod.ring_signed_area(xs, ys))
            _, _, r = kmod.min_enclosing_circle(xs[:-1], ys[:-1])
            acc += a / (math.pi * r * r)
    elif metric == "ipq":
        for xs, ys in rings:
            a = abs(kmod.ring_signed_area(xs, ys))
            p = kmod.ring_perimeter(xs, ys)
            acc += 4.0 * math.pi * a / (p * p)
    elif metric == "iaq":
        for xs, ys in rings:
            a = abs(kmod.ring_signed_area(xs, ys))
            p = kmod.ring_perimeter(xs, ys)
            acc += 2.0 * math.pi * math.sqrt(a / math.pi) / p
    elif metric == "rr":
        for xs, ys in rings:
            a = abs(kmod.ring_signed_area(xs, ys))
            _, _, r = kmod.min_enclosing_circle(xs[:-1], ys[:-1])
            acc += math.sqrt(a / math.pi) / r
    elif metric == "dr":
        for xs, ys in rings:
            hx, hy = kmod.convex_hull(xs[:-1], ys[:-1])
            w, l, _ = kmod.min_area_rect(hx, hy)
            acc += w / l
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return acc


def sample_faces(faces: Sequence, n: int, seed: int):
    """Seeded sample of faces; with replacement when there are not enough."""
    rng = random.Random(seed)
    with_replacement = len(faces) < n
    if with_replacement:
        chosen = [faces[rng.randrange(len(faces))] for _ in range(n)]
    else:
        chosen = rng.sample(list(faces), n)
    return chosen, with_replacement


def run_benchmark(
    faces: Sequence,
    sample_size: int = DEFAULT_SAMPLE,
    repetitions: int = DEFAULT_REPETITIONS,
    seed: int = 0,
    backends: Sequence[str] = (BACKEND,),
) -> dict:
    """Per-metric wall times (seconds): mean/std/min over repetitions."""
    chosen, with_replacement = sample_faces(faces, sample_size, seed)
    rings = [(f.ring.xs, f.ring.ys) for f in chosen]

    results: Dict[str, dict] = {}
    for backend in backends:
        kmod = _kernel_module(backend)
        per_metric = {}
        for metric in METRICS:
            times = []
            for _ in range(repetitions):
                t0 = time.perf_counter()
                _metric_pass(kmod, rings, metric)
                times.append(time.perf_counter() - t0)
            mean = sum(times) / len(times)
            var = sum((t - mean) ** 2 for t in times) / len(times)
            per_metric[metric] = {
                "mean_s": mean,
                "std_s": math.sqrt(var),
                "min_s": min(times),
            }
        results[backend] = per_metric

    return {
        "n_polygons": len(rings),
        "sampled_with_replacement": with_replacement,
        "repetitions": repetitions,
        "seed": seed,
        "single_threaded": True,
        "backends": results,
    }


def format_report(report: dict) -> str:
    lines = [
        f"benchmark: {report['n_polygons']} polygons, "
        f"{report['repetitions']} repetitions, seed {report['seed']}"
        + (" (sampled with replacement)"
           if report["sampled_with_replacement"] else "")
    ]
    for backend, per_metric in report["backends"].items():
        lines.append(f"[{backend} kernels]")
        lines.append(f"  {'metric':<8}{'mean':>12}{'std':>12}{'min':>12}")
        for metric in METRICS:
            row = per_metric[metric]
            lines.append(
                f"  {metric:<8}"
                f"{row['mean_s'] * 1e3:>10.3f}ms"
                f"{row['std_s'] * 1e3:>10.3f}ms"
                f"{row['min_s'] * 1e3:>10.3f}ms"
            )
    return "\n".join(lines)
