"""Command-line interface.

Subcommands: ``analyze``, ``encode``, ``decode``, ``bound``, ``synth``,
``macsim``, ``report``.  Exit codes: 0 success, 1 validation error,
2 internal error.  All commands are deterministic for a fixed ``--seed``.
"""

from __future__ import annotations

import argparse
import fnmatch
import hashlib
import json
import sys

import numpy as np

from . import codec, entropy, macsim, report, synth
from .bundle import Bundle, Manifest, TensorRecord, read_bundle, write_bundle
from .errors import InvalidParamError, LpcodecError
from .schemes import CodingScheme


class _Parser(argparse.ArgumentParser):
    # bad command lines are validation errors (exit 1), not internal errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common_flags(p: argparse.ArgumentParser, bundle_required: bool = True) -> None:
    p.add_argument("--bundle", required=bundle_required, help="bundle directory")
    p.add_argument("--out", help="output path (report file or bundle directory)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=None, help="PRNG/shuffle seed")


def _emit(doc: dict, args, csv_text: str | None = None, to_stdout: bool = False) -> None:
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if args.out and not to_stdout:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_analyze(args) -> None:
    bundle = read_bundle(args.bundle)
    doc = report.analyze_bundle(bundle, shuffle_seed=args.seed)
    _emit(doc, args, report.report_to_csv(doc))


def _cmd_report(args) -> None:
    bundle = read_bundle(args.bundle)
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    if not schemes:
        raise InvalidParamError("no schemes given")
    for name in schemes:  # reject unknown names before doing any work
        CodingScheme.parse(name, zp=0)
    doc = report.report_bundle(bundle, schemes, shuffle_seed=args.seed)
    _emit(doc, args, report.report_to_csv(doc))


def _recode_bundle(args, direction: str) -> None:
    bundle = read_bundle(args.bundle)
    out_dir = args.out or args.bundle
    manifest = Manifest(provenance=bundle.manifest.provenance)
    tensors: dict[str, np.ndarray] = {}
    changed = []
    for name in bundle.names():
        rec = bundle.record(name)
        new_rec = TensorRecord(**{**rec.to_dict()})
        data = bundle.tensor(name)
        selected = rec.dtype in ("int8", "uint8") and fnmatch.fnmatch(name, args.tensors)
        if selected:
            words = bundle.words(name)
            if direction == "encode":
                if rec.encoding != "raw":
                    raise InvalidParamError(f"{name} is already encoded as {rec.encoding}")
                scheme = CodingScheme.parse(args.scheme, zp=rec.zp_word)
                coded = codec.apply_scheme(scheme, words, "encode")
                new_rec.encoding = scheme.name()
            else:
                coded = codec.apply_scheme(rec.scheme(), words, "decode")
                new_rec.encoding = "raw"
            data = coded.words.view(np.int8 if rec.dtype == "int8" else np.uint8).reshape(rec.shape)
            changed.append(name)
        manifest.tensors.append(new_rec)
        tensors[name] = data
    write_bundle(manifest, tensors, out_dir)
    _emit({"bundle": str(out_dir), "direction": direction, "changed": changed}, args, to_stdout=True)


def _cmd_encode(args) -> None:
    _recode_bundle(args, "encode")


def _cmd_decode(args) -> None:
    _recode_bundle(args, "decode")


def _cmd_bound(args) -> None:
    bundle = read_bundle(args.bundle)
    reports = []
    for name in bundle.names():
        rec = bundle.record(name)
        if rec.dtype not in ("int8", "uint8"):
            continue
        if args.tensors and not fnmatch.fnmatch(name, args.tensors):
            continue
        words = bundle.words(name)
        if rec.encoding != "raw":
            words = codec.apply_scheme(rec.scheme(), words, "decode")
        scheme = CodingScheme.parse(args.scheme, zp=rec.zp_word)
        gap = entropy.bound_gap_report(words, scheme)
        reports.append({"tensor": name, **gap.to_dict()})
    _emit({"scheme": args.scheme, "rows": reports}, args)


def _cmd_synth(args) -> None:
    seed = args.seed if args.seed is not None else 0
    if args.preset:
        preset = synth.WEIGHT_PRESETS.get(args.preset)
        if preset is None:
            raise InvalidParamError(f"unknown preset {args.preset!r}")
    else:
        if args.nu is None:
            raise InvalidParamError("give --preset or --nu")
        preset = synth.WeightPreset(args.nu, args.sigma, args.channel_size)
    weights, qp = synth.synth_weights(preset, args.n, seed=seed, rho=args.rho)
    channels = weights.size // preset.channel_size
    manifest = Manifest(
        provenance=f"lpcodec synth nu={preset.nu} sigma={preset.sigma} "
        f"channel_size={preset.channel_size} rho={args.rho} seed={seed}",
    )
    manifest.tensors.append(
        TensorRecord(
            name="weights",
            dtype="int8",
            shape=[channels, preset.channel_size],
            scale=[float(s) for s in np.asarray(qp.scale).reshape(-1)],
            scale_axis=0,
            zero_point=0,
            encoding="raw",
        )
    )
    tensors = {"weights": weights.reshape(channels, preset.channel_size)}
    if args.activations:
        act = synth.synth_relu_activations(args.sigma_pre, args.act_scale, args.n, seed=seed + 1)
        manifest.tensors.append(
            TensorRecord(
                name="activations",
                dtype="int8",
                shape=[args.n],
                scale=args.act_scale,
                zero_point=synth.ACTIVATION_ZERO_POINT,
                encoding="raw",
            )
        )
        tensors["activations"] = act
    if not args.out:
        raise InvalidParamError("synth needs --out BUNDLE_DIR")
    write_bundle(manifest, tensors, args.out)
    _emit(
        {"bundle": args.out, "tensors": [t.name for t in manifest.tensors], "seed": seed},
        args,
        to_stdout=True,
    )


def _cmd_macsim(args) -> None:
    bundle = read_bundle(args.bundle)
    w_words = bundle.words(args.weights)
    a_words = bundle.words(args.activations)
    w_rec = bundle.record(args.weights)
    a_rec = bundle.record(args.activations)
    if w_rec.encoding != "raw":
        w_words = codec.apply_scheme(w_rec.scheme(), w_words, "decode")
    if a_rec.encoding != "raw":
        a_words = codec.apply_scheme(a_rec.scheme(), a_words, "decode")
    w_vals = w_words.signed()
    a_vals = a_words.signed()

    length = args.length
    max_start = min(w_vals.size, a_vals.size) - length
    n_vec = min(w_vals.size // length, a_vals.size // length, args.max_vectors)
    if n_vec < 1 or max_start < 0:
        raise InvalidParamError("tensors shorter than one vector of the requested length")
    if args.seed is not None:  # sample windows; default walks the tensors front to back
        starts = np.random.default_rng(args.seed).integers(0, max_start + 1, size=n_vec)
    else:
        starts = np.arange(n_vec) * length
    variant = macsim.MacVariant(args.variant)
    rescale = macsim.RescaleParams(args.rescale_m, args.rescale_shift, 0)

    outputs = np.empty(n_vec, dtype=np.int8)
    equivalent = True
    totals = {"input_registers": 0, "partial_products": 0, "negation_xor": 0, "adder_tree": 0}
    cycles = 0
    for i, start in enumerate(starts):
        wv = w_vals[start : start + length]
        av = a_vals[start : start + length]
        ref = macsim.rescale_saturate(macsim.dot_accumulate(macsim.MacVariant.A, wv, av, 0), rescale)
        if variant is macsim.MacVariant.A:
            out, rep = macsim.ipu_execute(variant, wv, av, 0, rescale)
        elif variant is macsim.MacVariant.B:
            sm = macsim.sm_words_from_values(wv)
            out, rep = macsim.ipu_execute(variant, sm, av, 0, rescale)
        else:
            sm = macsim.sm_words_from_values(wv)
            coded = macsim.zp_coded_words_from_values(av)
            bias = macsim.adjust_bias_for_unsigned(wv, 0)
            out, rep = macsim.ipu_execute(variant, sm, coded, bias, rescale)
        outputs[i] = out
        equivalent &= out == ref
        cycles += rep.n_cycles
        for key in totals:
            totals[key] += getattr(rep, key)
    doc = {
        "variant": variant.value,
        "vectors": n_vec,
        "vector_length": length,
        "outputs_digest": hashlib.sha256(outputs.tobytes()).hexdigest(),
        "equivalence": "pass" if equivalent else "fail",
        "toggles": {
            "variant": variant.value,
            "n_cycles": cycles,
            "per_component": totals,
            "multiplier": totals["partial_products"] + totals["negation_xor"],
            "total": sum(totals.values()),
        },
    }
    _emit(doc, args)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpcodec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[], help="measure tensors as stored")
    _common_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("report", help="reduction table for a list of schemes")
    _common_flags(p)
    p.add_argument("--schemes", default="raw,xor-msb,xor-msb+decorr")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("encode", help="re-encode raw tensors under a scheme")
    _common_flags(p)
    p.add_argument("--scheme", required=True)
    p.add_argument("--tensors", default="*", help="glob over tensor names")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="decode tensors back to raw")
    _common_flags(p)
    p.add_argument("--tensors", default="*", help="glob over tensor names")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("bound", help="entropy lower-bound gap report")
    _common_flags(p)
    p.add_argument("--scheme", default="raw")
    p.add_argument("--tensors", default=None, help="glob over tensor names")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("synth", help="generate a synthetic bundle")
    _common_flags(p, bundle_required=False)
    p.add_argument("--preset", choices=sorted(synth.WEIGHT_PRESETS), default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--channel-size", type=int, default=256)
    p.add_argument("--n", type=int, default=1_000_000, help="words per tensor")
    p.add_argument("--rho", type=float, default=0.0, help="magnitude-prune fraction")
    p.add_argument("--activations", action="store_true")
    p.add_argument("--sigma-pre", type=float, default=synth.ACTIVATION_PRESET["sigma_pre"])
    p.add_argument("--act-scale", type=float, default=synth.ACTIVATION_PRESET["scale"])
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("macsim", help="MAC equivalence and toggle proxy")
    _common_flags(p)
    p.add_argument("--weights", default="weights", help="weight tensor name")
    p.add_argument("--activations", default="activations", help="activation tensor name")
    p.add_argument("--variant", choices=("a", "b", "c"), default="c")
    p.add_argument("--length", type=int, default=1024)
    p.add_argument("--max-vectors", type=int, default=64)
    p.add_argument("--rescale-m", type=int, default=1 << 21)
    p.add_argument("--rescale-shift", type=int, default=31)
    p.set_defaults(func=_cmd_macsim)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except LpcodecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # noqa: BLE001 - anything else is an internal error
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
