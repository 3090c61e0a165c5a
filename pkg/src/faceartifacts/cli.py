"""Command-line front end.

Subcommands: fetch, polygonize, classify, validate, bench, distribution.
Exit codes: 0 success, 2 classify found no threshold, 3 parse error,
4 network error.
"""

import argparse
import csv
import logging
import os
import sys

from faceartifacts import bench as bench_mod
from faceartifacts import classify as classify_mod
from faceartifacts import threshold as th
from faceartifacts import validate as validate_mod
from faceartifacts.acquisition import (
    ENDPOINT_ENV_VAR,
    NetworkQuery,
    build_overpass_query,
    edge_set_to_geojson,
    faces_to_geojson,
    fetch,
    read_faces,
    read_geojson,
    read_labeled_faces,
    to_edge_set,
    utm_zone_for,
    write_json,
)
from faceartifacts.acquisition import overpass as overpass_mod
from faceartifacts.acquisition import projection as projection_mod
from faceartifacts.config import load_config
from faceartifacts.errors import (
    DegenerateSample,
    FaceArtifactsError,
    NetworkError,
    ParseError,
)
from faceartifacts.metrics import METRICS, enrich
from faceartifacts.polygonizer import (
    EdgeSet,
    FULL_GEOMETRIC,
    SHARED_ENDPOINTS,
    face_areas_summary,
    node_edges,
    polygonize,
)

log = logging.getLogger("faceartifacts")

EXIT_OK = 0
EXIT_NO_THRESHOLD = 2
EXIT_PARSE_ERROR = 3
EXIT_NETWORK_ERROR = 4


def _common_config(args) -> dict:
    overrides = {}
    for key in (
        "metric",
        "valley_rule",
        "noding_mode",
        "threshold_override",
        "seed",
        "grid_points",
        "peak_min_height",
        "peak_min_prominence",
    ):
        if hasattr(args, key):
            overrides[key] = getattr(args, key)
    if getattr(args, "validation_x", None):
        overrides["validation_x"] = tuple(
            float(x) for x in args.validation_x.split(",")
        )
    return overrides


def _load_faces(path, config):
    data = read_geojson(path, noding_mode=config.noding_mode)
    if isinstance(data, EdgeSet):
        log.info("input is linework; polygonizing first")
        return polygonize(node_edges(data))
    return read_faces(path)


def cmd_fetch(args) -> int:
    endpoint = (
        args.endpoint
        or os.environ.get(ENDPOINT_ENV_VAR)
        or overpass_mod.DEFAULT_ENDPOINT
    )
    classes = (
        tuple(args.classes.split(","))
        if args.classes
        else overpass_mod.DEFAULT_HIGHWAY_CLASSES
    )
    query = NetworkQuery(
        bbox=tuple(args.bbox),
        highway_classes=classes,
        timeout_s=args.timeout,
        endpoint=endpoint,
    )
    if args.dry_run:
        sys.stdout.write(build_overpass_query(query))
        return EXIT_OK
    graph = fetch(query)
    lon = (query.bbox[0] + query.bbox[2]) / 2.0
    lat = (query.bbox[1] + query.bbox[3]) / 2.0
    tm = utm_zone_for(lon, lat)
    es = to_edge_set(graph, tm)
    doc = edge_set_to_geojson(es, extra={"projection": projection_mod.describe(tm)})
    write_json(doc, args.output)
    log.info(
        "fetched %d ways -> %d polylines -> %s",
        len(graph.ways), len(es.edges), args.output,
    )
    return EXIT_OK


def cmd_polygonize(args) -> int:
    config = load_config(args.config, _common_config(args))
    data = read_geojson(args.network, noding_mode=config.noding_mode)
    if not isinstance(data, EdgeSet):
        raise ParseError("polygonize expects line features")
    stats: dict = {}
    faces = polygonize(node_edges(data), stats=stats)
    write_json(faces_to_geojson(faces), args.output)
    summary = face_areas_summary(faces)
    log.info("polygonize: %s; stats: %s", summary, stats)
    return EXIT_OK


def cmd_classify(args) -> int:
    config = load_config(args.config, _common_config(args))
    faces = _load_faces(args.input, config)
    records = enrich(faces)
    result = classify_mod.classify(
        records,
        metric=config.metric,
        threshold_override=config.threshold_override,
        grid_points=config.grid_points,
        min_height=config.peak_min_height,
        min_prominence=config.peak_min_prominence,
        valley_rule=config.valley_rule,
    )
    prefix = args.output
    write_json(classify_mod.feature_collection(records, result), prefix + ".geojson")
    write_json(
        classify_mod.run_report(result, parameters=config.as_dict()),
        prefix + "_report.json",
    )
    if result.report.curve is not None:
        with open(prefix + "_kde.csv", "w", encoding="utf-8") as fp:
            th.curve_to_csv(result.report.curve, fp)
    if not result.found:
        log.warning("no threshold detected: %s", result.report.reason)
        return EXIT_NO_THRESHOLD
    log.info(
        "threshold %.6g (%s): %d artifacts / %d blocks",
        result.report.threshold,
        result.metric,
        result.counts["n_artifacts"],
        result.counts["n_blocks"],
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    config = load_config(args.config, _common_config(args))
    faces, labels = read_labeled_faces(args.labels)
    artifacts = [f for f, l in zip(faces, labels) if l == classify_mod.ARTIFACT]
    buildings = read_geojson(args.buildings)
    if isinstance(buildings, EdgeSet):
        raise ParseError("buildings file must contain polygon features")
    overlaps = validate_mod.overlap_areas(artifacts, buildings)
    report = validate_mod.false_positive_rates(
        overlaps.areas, config.validation_x, overlaps.invalid_buildings
    )
    write_json(validate_mod.report_to_dict(report), args.output + ".json")
    with open(args.output + ".csv", "w", encoding="utf-8") as fp:
        validate_mod.report_to_csv(report, fp)
    for e in report.per_level:
        rate = "n/a" if e["rate"] is None else f"{100.0 * e['rate']:.2f}%"
        log.info("X=%g m^2: %s false positives", e["x"], rate)
    return EXIT_OK


def cmd_bench(args) -> int:
    config = load_config(args.config, _common_config(args))
    faces = _load_faces(args.faces, config)
    if args.backends == "both":
        backends = bench_mod.available_backends()
    else:
        backends = [args.backends]
    report = bench_mod.run_benchmark(
        faces,
        sample_size=args.sample,
        repetitions=args.repetitions,
        seed=config.seed,
        backends=backends,
    )
    sys.stdout.write(bench_mod.format_report(report) + "\n")
    if args.output:
        write_json(report, args.output)
    return EXIT_OK


def cmd_distribution(args) -> int:
    config = load_config(args.config, _common_config(args))
    faces = _load_faces(args.input, config)
    records = enrich(faces)
    extrema_doc = {}
    with open(args.output + "_kde.csv", "w", encoding="utf-8") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["metric", "grid", "density"])
        for metric in METRICS:
            values = [r.fai[metric] for r in records]
            try:
                report = th.detect(
                    values,
                    grid_points=config.grid_points,
                    min_height=config.peak_min_height,
                    min_prominence=config.peak_min_prominence,
                    valley_rule=config.valley_rule,
                )
            except DegenerateSample as exc:
                extrema_doc[metric] = {"status": "no-threshold", "reason": str(exc)}
                continue
            curve = report.curve
            for g, d in zip(curve.grid.tolist(), curve.density.tolist()):
                writer.writerow([metric, repr(g), repr(d)])
            extrema_doc[metric] = th.report_to_dict(report)
    write_json(extrema_doc, args.output + "_extrema.json")
    log.info("distribution written to %s_kde.csv / %s_extrema.json",
             args.output, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faceartifacts",
        description="Detect face artifacts in polygonized street networks.",
    )
    parser.add_argument("--quiet", action="store_true", help="warnings only")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, metric=False):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="sampling seed")
        if metric:
            p.add_argument("--metric", choices=METRICS, default=None)
            p.add_argument("--valley-rule", dest="valley_rule",
                           choices=[th.VALLEY_RULE_ADJACENT, th.VALLEY_RULE_FIRST],
                           default=None)
            p.add_argument("--threshold", dest="threshold_override", type=float,
                           default=None,
                           help="skip detection, apply this threshold")

    p = sub.add_parser("fetch", help="download a street network via Overpass")
    p.add_argument("--bbox", nargs=4, type=float, required=True,
                   metavar=("MIN_LON", "MIN_LAT", "MAX_LON", "MAX_LAT"))
    p.add_argument("-o", "--output", required=True, help="EdgeSet GeoJSON path")
    p.add_argument("--classes", help="comma-separated highway classes")
    p.add_argument("--timeout", type=float, default=180.0)
    p.add_argument("--endpoint", help=f"Overpass URL (or ${ENDPOINT_ENV_VAR})")
    p.add_argument("--dry-run", action="store_true",
                   help="print the Overpass query and exit")
    add_common(p)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("polygonize", help="extract face polygons from linework")
    p.add_argument("network", help="network GeoJSON (LineStrings, meters)")
    p.add_argument("-o", "--output", required=True, help="faces GeoJSON path")
    p.add_argument("--noding", dest="noding_mode",
                   choices=[SHARED_ENDPOINTS, FULL_GEOMETRIC], default=None)
    add_common(p)
    p.set_defaults(func=cmd_polygonize)

    p = sub.add_parser("classify", help="label faces as artifact/block")
    p.add_argument("input", help="faces or network GeoJSON")
    p.add_argument("-o", "--output", required=True,
                   help="output prefix (.geojson, _report.json, _kde.csv)")
    p.add_argument("--noding", dest="noding_mode",
                   choices=[SHARED_ENDPOINTS, FULL_GEOMETRIC], default=None)
    add_common(p, metric=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("validate", help="building-overlap false positives")
    p.add_argument("labels", help="labeled faces GeoJSON (classify output)")
    p.add_argument("buildings", help="building footprints GeoJSON")
    p.add_argument("-o", "--output", required=True,
                   help="report prefix (.json, .csv)")
    p.add_argument("--x", dest="validation_x",
                   help="comma-separated overlap levels in m^2")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="single-threaded metric benchmark")
    p.add_argument("faces", help="faces GeoJSON")
    p.add_argument("--sample", type=int, default=bench_mod.DEFAULT_SAMPLE)
    p.add_argument("--repetitions", type=int, default=bench_mod.DEFAULT_REPETITIONS)
    p.add_argument("--backends", choices=["c", "python", "both"],
                   default=bench_mod.BACKEND)
    p.add_argument("-o", "--output", help="also write the report as JSON")
    add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("distribution", help="export per-metric KDE curves")
    p.add_argument("input", help="faces or network GeoJSON")
    p.add_argument("-o", "--output", required=True,
                   help="output prefix (_kde.csv, _extrema.json)")
    add_common(p, metric=True)
    p.set_defaults(func=cmd_distribution)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except ParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE_ERROR
    except NetworkError as exc:
        log.error("network error: %s", exc)
        return EXIT_NETWORK_ERROR
    except FaceArtifactsError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
