"""Command-line front end: honest demos, attack scripts, self-tests, keygen.

Every run is deterministic: the same argument vector produces byte-identical
output.  Exit status 0 on success (and a matching --expect), 1 when an
--expect does not match or a selftest check fails, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from .group import Curve, CurveParameterError, TOY_CURVE, load_curve_file
from .ibs import Variant, extract_key, pkg_setup, sign, verify_signature
from .protocol import (
    BadSignature,
    MalformedMessage,
    StaleTimestamp,
    build_message,
    decode_message,
    encode_message,
)
from .rand import DeterministicRandom
from .sim import (
    MessageOrder,
    Outcome,
    run_ephemeral_compromise_attack,
    run_honest_exchange,
    run_replay_attack,
)
from . import sim


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("must fit in an unsigned 64-bit integer")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _add_run_options(parser, *, delay=False, expect=False):
    parser.add_argument(
        "--variant", choices=[v.value for v in Variant], default=Variant.FLAWED.value,
        help="protocol variant (default: flawed)",
    )
    parser.add_argument("--seed", type=_u64, default=1, help="run seed (default: 1)")
    parser.add_argument(
        "--window", type=_non_negative, default=10,
        help="freshness window in ticks (default: 10)",
    )
    if delay:
        parser.add_argument(
            "--delay", type=_non_negative, default=1000,
            help="ticks between interception and replay (default: 1000)",
        )
    parser.add_argument(
        "--curve", default="TOY",
        help="TOY or path to a curve-parameter file (default: TOY)",
    )
    parser.add_argument("--output", default=None, help="write the report to a file")
    if expect:
        parser.add_argument(
            "--expect", choices=["succeeded", "defeated"],
            help="exit 1 unless the attack outcome matches",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ibaka",
        description="Two-message authenticated key agreement demos and attacks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    demo = commands.add_parser("demo", help="run one honest exchange")
    _add_run_options(demo)

    attack = commands.add_parser("attack", help="run a man-in-the-middle script")
    attack.add_argument("kind", choices=["replay", "ephemeral"])
    _add_run_options(attack, delay=True, expect=True)

    selftest = commands.add_parser("selftest", help="run the invariant suites")
    selftest.add_argument("--output", default=None, help="write the report to a file")

    keygen = commands.add_parser(
        "keygen", help="PKG setup plus key extraction, written as a key file"
    )
    keygen.add_argument("--seed", type=_u64, default=1, help="run seed (default: 1)")
    keygen.add_argument("--id", default="server-1", help="identity to extract")
    keygen.add_argument(
        "--curve", default="TOY",
        help="TOY or path to a curve-parameter file (default: TOY)",
    )
    keygen.add_argument("--output", default=None, help="write the key file here")
    return parser


def _resolve_curve(choice: str) -> Curve:
    if choice == "TOY":
        return TOY_CURVE
    return load_curve_file(choice)


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "wb") as fh:
            fh.write(text.encode("utf-8"))


def _cmd_demo(args) -> int:
    curve = _resolve_curve(args.curve)
    result = run_honest_exchange(
        args.seed, Variant(args.variant), MessageOrder.SERVER_FIRST,
        window=args.window, curve=curve,
    )
    _emit(result.to_json(), args.output)
    return 0


def _cmd_attack(args) -> int:
    curve = _resolve_curve(args.curve)
    variant = Variant(args.variant)
    if args.kind == "replay":
        report = run_replay_attack(
            args.seed, variant, args.delay, window=args.window, curve=curve
        )
    else:
        report = run_ephemeral_compromise_attack(
            args.seed, variant, args.delay, window=args.window, curve=curve
        )
    _emit(report.to_json(), args.output)
    if args.expect is not None and report.outcome.name.lower() != args.expect:
        print(
            f"expectation mismatch: outcome {report.outcome.name}, "
            f"expected {args.expect.upper()}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_keygen(args) -> int:
    curve = _resolve_curve(args.curve)
    rng = DeterministicRandom(args.seed)
    master = pkg_setup(curve, rng)
    keys = extract_key(master, args.id, rng)
    lines = [
        "# extracted identity key; demo storage only, the private key is in the clear",
        f"id = {keys.identity}",
        f"s = {keys.secret}",
        f"rx = {keys.R.x}",
        f"ry = {keys.R.y}",
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _selftest_checks():
    """Small deterministic versions of the library invariants."""
    curve = TOY_CURVE

    def group_laws():
        points = curve.points()
        assert len(points) == curve.q
        for u in points:
            for v in points:
                assert curve.add(u, v) == curve.add(v, u)
        for u in points:
            assert curve.add(u, curve.negate(u)).is_identity

    def scalar_mul_oracle():
        for u in curve.points():
            running = curve.mul(0, u)
            assert running.is_identity
            for k in range(1, 2 * curve.q):
                running = curve.add(running, u)
                assert curve.mul(k, u) == running

    def point_codec():
        for u in curve.points():
            assert curve.decode_point(curve.encode_point(u)) == u

    def signature_round_trip():
        for variant in Variant:
            for seed in range(1, 51):
                rng = DeterministicRandom(seed)
                master = pkg_setup(curve, rng)
                keys = extract_key(master, sim.SERVER_ID, rng)
                y = rng.scalar(curve.q)
                Y = curve.mul(y, curve.gen)
                sig, _ = sign(keys, sim.CLIENT_ID, Y, 100, variant, rng)
                assert verify_signature(
                    curve, sig, keys.identity, sim.CLIENT_ID, Y, 100,
                    master.public, variant,
                )

    def honest_exchanges():
        for variant in Variant:
            for order in MessageOrder:
                for seed in range(1, 6):
                    result = run_honest_exchange(seed, variant, order)
                    assert result.keys_equal

    def replay_matrix():
        for seed in range(1, 6):
            assert run_replay_attack(seed, Variant.FLAWED).outcome is Outcome.SUCCEEDED
            fixed = run_replay_attack(seed, Variant.FIXED)
            assert fixed.outcome is Outcome.DEFEATED
            assert fixed.reason == BadSignature.__name__
            stale = run_replay_attack(seed, Variant.FIXED, rewrite_timestamp=False)
            assert stale.reason == StaleTimestamp.__name__

    def ephemeral_matrix():
        for seed in range(1, 6):
            flawed = run_ephemeral_compromise_attack(seed, Variant.FLAWED)
            assert flawed.keys_match and flawed.outcome is Outcome.SUCCEEDED
            fixed = run_ephemeral_compromise_attack(seed, Variant.FIXED)
            assert not fixed.keys_match and fixed.outcome is Outcome.DEFEATED

    def message_codec():
        for seed in range(1, 26):
            rng = DeterministicRandom(seed)
            master = pkg_setup(curve, rng)
            keys = extract_key(master, sim.SERVER_ID, rng)
            msg, _ = build_message(keys, sim.CLIENT_ID, 100, Variant.FIXED, rng)
            wire = encode_message(curve, msg)
            assert decode_message(curve, wire) == msg
            try:
                decode_message(curve, wire[:-1])
            except MalformedMessage:
                pass
            else:
                raise AssertionError("truncated message accepted")

    return [
        ("group-laws", group_laws),
        ("scalar-mul-oracle", scalar_mul_oracle),
        ("point-codec", point_codec),
        ("signature-round-trip", signature_round_trip),
        ("honest-exchanges", honest_exchanges),
        ("replay-matrix", replay_matrix),
        ("ephemeral-matrix", ephemeral_matrix),
        ("message-codec", message_codec),
    ]


def _cmd_selftest(args) -> int:
    lines = []
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except AssertionError:
            lines.append(f"FAIL {name}")
            failures += 1
        else:
            lines.append(f"PASS {name}")
    total = len(lines)
    lines.append(f"selftest: {total - failures}/{total} passed")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    handlers = {
        "demo": _cmd_demo,
        "attack": _cmd_attack,
        "selftest": _cmd_selftest,
        "keygen": _cmd_keygen,
    }
    try:
        return handlers[args.command](args)
    except (CurveParameterError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
