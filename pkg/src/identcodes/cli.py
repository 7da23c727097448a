"""Command-line entry point: ``identcodes <subcommand> [flags]``.

Exit codes: 0 success or ACCEPT, 1 REJECT, 2 usage error, 3 runtime error
(including a call that times out).  Machine output goes to stdout,
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings

from . import bounds
from .bits import symbols_from_hex
from .errors import IdentError
from .experiments import TrialConfig, estimate_lambda2, lfsr_attack_sweep
from .gf import field_new
from .identify_code import CodeSpec, send
from .identify_prng import GENERATOR_IDS, LFSR, LfsrSpec, LinearGeneratorWarning, PrngScheme, prng_send
from .net import CallResult, Caller, Registry, parse_endpoint, responder_serve
from .wire import encode_code_word, encode_prng_word, verify_encoded
from .xof import derive_rng

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

log = logging.getLogger("identcodes")


class UsageError(Exception):
    pass


def _emit(args, rows: dict[str, object], title: str | None = None) -> None:
    if args.output == "kv":
        for k, v in rows.items():
            print(f"{k}={v}")
        return
    if title:
        print(title)
    width = max(len(k) for k in rows)
    for k, v in rows.items():
        print(f"  {k:<{width}}  {v}")


def _rng(args, purpose: str):
    if args.seed is None:
        if purpose in ("send", "call"):
            print(f"{purpose}: no --seed given, using system entropy", file=sys.stderr)
        return derive_rng(os.urandom(32), purpose)
    return derive_rng(bytes.fromhex(args.seed), "cli", purpose)


def _master_seed(args) -> int:
    return int(args.seed, 16) if args.seed else 0


def _seed_arg(text: str) -> str:
    try:
        value = int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex string: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    # odd-length input such as "0" is fine; normalise to whole bytes
    digits = text.lower().removeprefix("0x")
    return digits.rjust(len(digits) + len(digits) % 2, "0")


def _hex_arg(text: str) -> str:
    try:
        bytes.fromhex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex string: {text!r}") from None
    return text


def _coeff_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x, 0) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}") from None


def _add_scheme_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scheme")
    g.add_argument("--scheme", choices=("code", "prng"), default="code")
    g.add_argument("--m", type=int, default=8, help="field bit-width, q = 2^m")
    g.add_argument("--k", type=int, default=16, help="message length in symbols")
    g.add_argument("--n", type=int, default=2**20, help="code length (code scheme)")
    g.add_argument("--ell", type=int, default=1, help="tags per word")
    g.add_argument("--mu", type=int, default=8, help="seed length in symbols (prng scheme)")
    g.add_argument("--key", type=_hex_arg, default="", help="shared code key as hex (code scheme)")
    g.add_argument("--generator", choices=tuple(GENERATOR_IDS), default="nonlinear-default")
    g.add_argument("--lfsr-a", type=_coeff_list, help="LFSR feedback coefficients a_1,...,a_mu")


def _scheme(args):
    f = field_new(args.m)
    if args.scheme == "code":
        return CodeSpec(f, args.k, args.n, bytes.fromhex(args.key))
    lfsr = None
    mu = args.mu
    if args.generator == LFSR:
        if not args.lfsr_a:
            raise UsageError("--generator lfsr needs --lfsr-a")
        lfsr = LfsrSpec(f, args.lfsr_a)
        mu = lfsr.mu
    return PrngScheme(f, args.k, args.ell, mu, args.generator, lfsr)


def _message(scheme, text: str):
    f = scheme.field
    try:
        return scheme.message(symbols_from_hex(text, f.m, scheme.k))
    except ValueError as e:
        raise UsageError(f"--message: {e}") from None


def cmd_plan(args) -> int:
    if args.delta_inv is not None:
        delta = 1 - 1 / args.delta_inv
    elif args.delta is not None:
        delta = args.delta
    else:
        raise UsageError("plan needs --delta-inv or --delta")
    if args.eps_exp is not None:
        eps = 2.0**args.eps_exp
    elif args.eps is not None:
        eps = args.eps
    else:
        raise UsageError("plan needs --eps-exp or --eps")
    ps = bounds.plan_example(args.q, args.n, delta, eps, args.ell)
    rows = ps.as_kv()
    if args.output == "table":
        rows["rate"] = f"{ps.rate:.3f}"
        rows["log10_one_minus_P"] = f"{ps.log10_one_minus_P:.2f}"
    _emit(args, rows, "parameter set")
    return EXIT_OK


def _encode(scheme, args, u, rng) -> bytes:
    if isinstance(scheme, PrngScheme):
        return encode_prng_word(scheme, prng_send(scheme, u, rng))
    return encode_code_word(scheme, send(scheme, u, args.ell, rng))


def cmd_send(args) -> int:
    scheme = _scheme(args)
    u = _message(scheme, args.message)
    data = _encode(scheme, args, u, _rng(args, "send"))
    _emit(args, {"word": data.hex(), "bytes": len(data)}, "identification word")
    return EXIT_OK


def cmd_verify(args) -> int:
    scheme = _scheme(args)
    u = _message(scheme, args.message)
    try:
        data = bytes.fromhex(args.word)
    except ValueError:
        raise UsageError("--word is not hex") from None
    ell = args.ell if isinstance(scheme, CodeSpec) else None
    v = verify_encoded(scheme, u, data, ell)
    _emit(args, {"verdict": "ACCEPT" if v else "REJECT", "reason": v.reason.name.lower()}, "verification")
    if v.detail:
        print(f"verify: {v.reason.name}: {v.detail}", file=sys.stderr)
    return EXIT_OK if v else EXIT_REJECT


def cmd_simulate(args) -> int:
    scheme = _scheme(args)
    cfg = TrialConfig(scheme, args.trials, _master_seed(args), args.mode, args.ell, workers=args.workers)
    rep = estimate_lambda2(cfg)
    _emit(args, rep.as_kv(), "false-acceptance estimate")
    return EXIT_OK


def cmd_attack(args) -> int:
    f = field_new(args.m)
    spec = LfsrSpec(f, args.a)
    if args.mu is not None and args.mu != spec.mu:
        raise UsageError(f"--mu {args.mu} disagrees with {spec.mu} coefficients in --a")
    seeds = args.seeds if args.seeds in ("all", "auto") else int(args.seeds)
    rep = lfsr_attack_sweep(spec, args.k, args.ell, seeds, _master_seed(args), args.generator)
    if args.output == "kv":
        _emit(args, rep.as_kv())
    else:
        print(f"accepted {rep.accepted}/{rep.seeds} seeds, lambda2={rep.as_kv()['lambda2']}")
    return EXIT_OK


def cmd_serve(args) -> int:
    scheme = _scheme(args)
    reg = Registry.load(args.registry, scheme)
    ell = args.ell if isinstance(scheme, CodeSpec) else None
    try:
        responder_serve(reg, args.label, parse_endpoint(args.endpoint), ell)
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_call(args) -> int:
    scheme = _scheme(args)
    if args.message:
        u = _message(scheme, args.message)
    elif args.registry and args.label:
        u = Registry.load(args.registry, scheme)[args.label]
    else:
        raise UsageError("call needs --message, or --registry with --label")
    rng = _rng(args, "call")
    counts = {r: 0 for r in CallResult}
    with Caller(parse_endpoint(args.endpoint), scheme, args.ell, args.timeout_ms / 1000, args.retries, rng) as c:
        for _ in range(args.count):
            counts[c.call(u).result] += 1
    if args.count == 1:
        result = next(r for r, n in counts.items() if n)
        _emit(args, {"result": result.value}, "call")
    else:
        _emit(args, {r.value.lower(): n for r, n in counts.items()}, f"{args.count} calls")
    if counts[CallResult.ACCEPT] == args.count:
        return EXIT_OK
    if counts[CallResult.TIMEOUT] == args.count:
        return EXIT_RUNTIME
    return EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="identcodes", description="Message identification toolkit.")
    p.add_argument("--seed", type=_seed_arg, help="master randomness seed (hex)")
    p.add_argument("--output", choices=("table", "kv"), default="table")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("plan", help="size a random code and report rates and bounds")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--delta-inv", type=float, help="sets delta = 1 - 1/N")
    sp.add_argument("--delta", type=float)
    sp.add_argument("--eps-exp", type=int, help="sets eps = 2^E")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--ell", type=int, default=1)
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("send", help="produce an encoded identification word")
    _add_scheme_flags(sp)
    sp.add_argument("--message", required=True, help="message symbols, packed, as hex")
    sp.set_defaults(func=cmd_send)

    sp = sub.add_parser("verify", help="check an encoded word against an expected message")
    _add_scheme_flags(sp)
    sp.add_argument("--message", required=True)
    sp.add_argument("--word", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("simulate", help="estimate the false-acceptance probability")
    _add_scheme_flags(sp)
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--mode", choices=("random-pairs", "worst-pair-exhaustive"), default="random-pairs")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("attack-lfsr", help="run the linear-generator attack over many seeds")
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--mu", type=int)
    sp.add_argument("--a", type=_coeff_list, required=True, help="feedback coefficients a_1,...,a_mu")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--seeds", default="auto", help="'all', 'auto' or a number of random seeds")
    sp.add_argument("--generator", choices=tuple(GENERATOR_IDS), default=LFSR)
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("serve", help="answer calls for one registry entry")
    _add_scheme_flags(sp)
    sp.add_argument("--endpoint", required=True)
    sp.add_argument("--registry", required=True)
    sp.add_argument("--label", required=True)
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("call", help="call a responder")
    _add_scheme_flags(sp)
    sp.add_argument("--endpoint", required=True)
    sp.add_argument("--registry")
    sp.add_argument("--label")
    sp.add_argument("--message")
    sp.add_argument("--timeout-ms", type=int, default=1000)
    sp.add_argument("--retries", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_call)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    warnings.simplefilter("default", LinearGeneratorWarning)
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (IdentError, ValueError, KeyError, OSError) as e:
        print(f"{parser.prog}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
