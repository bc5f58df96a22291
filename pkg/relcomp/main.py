import argparse
import asyncio
import logging
import math
import os
import sys
import uuid

from dotenv import load_dotenv

from relcomp.algebra.errors import (
    BadParameters,
    NeedsUnitConstantTerm,
    NonGeneric,
    NotCoprime,
    NotInvertibleModF,
    SingularBasis,
)
from relcomp.algebra.field import get_field
from relcomp.algebra.relations import direct_truncated_table, mm_basis, nmu_basis
from relcomp.algebra.upoly import poly_inv_mod
from relcomp.checks import CHECKS, run_check
from relcomp.instances import (
    InstanceFormatError,
    random_bivariate_instance,
    random_instance,
    random_point_set,
    read_instance,
    write_instance,
)
from relcomp.reports import VerificationMismatch, sort_rows
from relcomp.services.database import BenchDatabase
from relcomp.services.export import ReportExporter
from relcomp.utils import setup_logger
from relcomp.worker import (
    BIVARIATE_ALGOS,
    COMPOSE_ALGOS,
    BenchWorker,
    Job,
    bivcompose_job,
    compose_job,
    mpe_job,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3


def _int_list(text):
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return values


def _name_list(choices):
    def parse(text):
        names = [tok.strip() for tok in text.split(",") if tok.strip()]
        bad = [name for name in names if name not in choices]
        if bad or not names:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)}")
        return names
    return parse


def build_parser():
    default_p = os.getenv("RELCOMP_PRIME", "998244353")
    parser = argparse.ArgumentParser(prog="relcomp", description="Modular composition through relation bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--p", type=int, default=int(default_p), help="field characteristic")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-verify", action="store_true", help="skip the oracle check")

    c = sub.add_parser("compose", help="g(a) rem f")
    common(c)
    c.add_argument("--n", type=int, default=16)
    c.add_argument("--algo", choices=COMPOSE_ALGOS, default="relmat")
    c.add_argument("--instance", help="read f, a, g from an instance file")
    c.add_argument("--emit-instance", help="write the instance used to this path")

    b = sub.add_parser("bivcompose", help="G(x, a) rem f")
    common(b)
    b.add_argument("--n", type=int, default=16)
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--d", type=int, default=8)
    b.add_argument("--mu", type=int)
    b.add_argument("--algo", choices=BIVARIATE_ALGOS, default="kronecker")

    e = sub.add_parser("mpe", help="evaluate G(x, y) at n points")
    common(e)
    e.add_argument("--n", type=int, default=16)
    e.add_argument("--m", type=int, default=2)
    e.add_argument("--d", type=int, default=8)

    r = sub.add_parser("basis", help="print an N or M relation basis")
    common(r)
    r.add_argument("--module", choices=("N", "M"), default="N")
    r.add_argument("--n", type=int, default=8)
    r.add_argument("--mu", type=int)
    r.add_argument("--instance")

    k = sub.add_parser("check", help="run the property suite")
    common(k)
    k.add_argument("--sizes", type=_int_list, default=[8, 16, 32])
    k.add_argument("--samples", type=int, default=3)
    k.add_argument("--only", type=_name_list(tuple(CHECKS)), default=list(CHECKS))
    k.add_argument("--threads", type=int)

    s = sub.add_parser("bench", help="size sweep with CSV/JSON/XLSX output")
    common(s)
    s.add_argument("--sizes", type=_int_list, default=[64, 256, 1024])
    s.add_argument("--algo", type=_name_list(COMPOSE_ALGOS), default=["brent-kung", "relmat"])
    s.add_argument("--csv")
    s.add_argument("--json")
    s.add_argument("--xlsx")
    s.add_argument("--db", default=os.getenv("RELCOMP_DB"))
    s.add_argument("--threads", type=int)
    return parser


def _emit(report):
    for line in report.format_lines():
        print(line)
    if report.verified is False:
        raise VerificationMismatch(f"{report.algo} at n={report.n} differs from the oracle")


# === SUBCOMMANDS ===


async def cmd_compose(args):
    if args.instance:
        inst = read_instance(args.instance)
    else:
        inst = random_instance(args.p, args.n, args.seed)
    if args.emit_instance:
        write_instance(inst, args.emit_instance)
    _emit(compose_job(inst, args.algo, verify=not args.no_verify))


async def cmd_bivcompose(args):
    inst = random_bivariate_instance(args.p, args.n, args.m, args.d, args.seed)
    _emit(bivcompose_job(inst, args.algo, mu=args.mu, verify=not args.no_verify))


async def cmd_mpe(args):
    inst = random_point_set(args.p, args.n, args.m, args.d, args.seed)
    _emit(mpe_job(inst, verify=not args.no_verify))


async def cmd_basis(args):
    inst = read_instance(args.instance) if args.instance else random_instance(args.p, args.n, args.seed)
    f, a, _ = inst.polys()
    n = int(f.degree)
    if args.module == "N":
        mu = args.mu or max(1, math.isqrt(n))
        try:
            basis = nmu_basis(f, a, mu)
        except SingularBasis as e:
            logger.warning(f"No certified N basis: {e}")
            print(f"module=N n={n} mu={mu} non-generic: {e}")
            return
    else:
        mu = args.mu or math.isqrt(n - 1) + 1
        delta = -(-n // mu)
        try:
            table = direct_truncated_table(f, poly_inv_mod(a, f), mu, 2 * delta)
            basis = mm_basis(f, a, mu, table)
        except (NonGeneric, NotInvertibleModF, NeedsUnitConstantTerm, NotCoprime) as e:
            logger.warning(f"No certified M basis: {e}")
            print(f"module=M n={n} mu={mu} non-generic: {e}")
            return
    print(
        f"module={basis.module_kind} n={n} mu={mu} degree={basis.delta} "
        f"column_degrees={list(basis.column_degrees)} {'generic' if basis.generic else 'non-generic'} certified"
    )
    for row in basis.matrix.entries:
        print("  " + " | ".join(str(list(e.coeffs)) for e in row))


async def cmd_check(args):
    K = get_field(args.p)
    jobs = [
        Job((name, n, args.seed + s), run_check, (name, K, n, args.seed + s))
        for name in args.only
        for n in args.sizes
        for s in range(args.samples)
    ]
    results = await BenchWorker(threads=args.threads).run(jobs)
    failures = 0
    for res in results:
        name, n, seed = res.key
        if res.failed:
            failures += 1
            print(f"check={name} n={n} seed={seed} error={res.error}")
            continue
        status = "ok" if res.value.passed else "FAILED"
        failures += not res.value.passed
        print(f"check={name} n={n} seed={seed} {status} {res.value.detail}".rstrip())
    print(f"{len(results) - failures}/{len(results)} checks passed")
    if failures:
        raise VerificationMismatch(f"{failures} property checks failed")


async def cmd_bench(args):
    verify = not args.no_verify
    jobs = [
        Job((algo, n), compose_job, (random_instance(args.p, n, args.seed), algo), {"verify": verify})
        for algo in args.algo
        for n in args.sizes
    ]
    worker = BenchWorker(threads=args.threads, stop_when=lambda report: report.verified is False)
    results = await worker.run(jobs)

    errors = [r for r in results if r.failed]
    for r in errors:
        logger.error(f"Bench job {r.key} failed: {r.error}")
    reports = [r.value for r in results if not r.failed]
    rows = sort_rows([row for report in reports for row in report.rows()])
    for report in reports:
        for line in report.format_lines():
            print(line)

    exporter = ReportExporter()
    frame = exporter.to_frame(rows)
    if args.csv:
        exporter.write_csv(frame, args.csv)
    if args.json:
        exporter.write_json(frame, args.json)
    if args.xlsx:
        exporter.write_xlsx(frame, args.xlsx)
    if args.db:
        db = BenchDatabase(args.db)
        await db.init_db()
        await db.add_rows(uuid.uuid4().hex, rows)

    for row in exporter.summary(frame).itertuples(index=False):
        logger.info(f"Total for {row.algo} at n={row.n}: {row.millis:.3f} ms")
    for algo in args.algo:
        slope = exporter.scaling_exponent(frame, algo)
        if slope is not None:
            logger.info(f"Measured scaling exponent for {algo}: {slope:.3f}")

    if worker.stopped or any(r.verified is False for r in reports):
        raise VerificationMismatch("bench sweep aborted on an oracle mismatch")
    if errors:
        raise RuntimeError(f"{len(errors)} bench jobs failed")


COMMANDS = {
    "compose": cmd_compose,
    "bivcompose": cmd_bivcompose,
    "mpe": cmd_mpe,
    "basis": cmd_basis,
    "check": cmd_check,
    "bench": cmd_bench,
}


async def main(argv=None):
    load_dotenv()
    setup_logger()

    try:
        parser = build_parser()
    except ValueError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        get_field(args.p)
        await COMMANDS[args.command](args)
    except VerificationMismatch as e:
        logger.error(f"Verification mismatch: {e}")
        return EXIT_MISMATCH
    except (InstanceFormatError, BadParameters, OSError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE
    except ValueError as e:
        # RELCOMP_THREADS and friends
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Command {args.command} failed: {e}", exc_info=True)
        return EXIT_ERROR
    return EXIT_OK


def run(argv=None):
    return asyncio.run(main(argv))


if __name__ == "__main__":
    code = EXIT_ERROR
    try:
        code = run()
    except KeyboardInterrupt:
        logging.info("Stopped.")
    sys.exit(code)
