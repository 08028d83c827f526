"""Reduction reports over bundles: per-tensor rows plus word-count-weighted aggregates.

The report reproduces the usual result-table structure: one row per
(tensor, scheme) with total switching, total 1-bits and the percent change
of each versus the 0.5/lane random baseline, plus the percentage-point
delta against the same tensor's raw row (raw data already deviates from
the baseline, so both views matter).
"""

from __future__ import annotations

import io

import numpy as np

from . import codec, stats
from .bundle import Bundle
from .schemes import CodingScheme, WordStream

CSV_COLUMNS = [
    "tensor",
    "scheme",
    "n_words",
    "T",
    "PR1",
    "switching_reduction_pct",
    "bitprob_reduction_pct",
    "switching_delta_vs_raw_pp",
    "bitprob_delta_vs_raw_pp",
]


def _eligible(bundle: Bundle) -> list[str]:
    return [n for n in bundle.names() if bundle.record(n).dtype in ("int8", "uint8")]


def _raw_words(bundle: Bundle, name: str) -> WordStream:
    """The tensor's words decoded back to the raw (uncoded) domain."""
    rec = bundle.record(name)
    words = bundle.words(name)
    if rec.encoding == "raw":
        return words
    return codec.apply_scheme(rec.scheme(), words, "decode")


def _measure_row(tensor: str, scheme_name: str, coded: WordStream) -> dict:
    st = stats.measure(coded)
    red = stats.reduction_vs_random(st)
    return {
        "tensor": tensor,
        "scheme": scheme_name,
        "n_words": st.n_words,
        "T": st.total_switching,
        "PR1": st.total_ones,
        "switching_reduction_pct": red.switching_reduction_pct,
        "bitprob_reduction_pct": red.bitprob_reduction_pct,
    }


def analyze_bundle(bundle: Bundle, shuffle_seed: int | None = None) -> dict:
    """Measure every 8-bit tensor as stored (no re-coding)."""
    rows = []
    for name in _eligible(bundle):
        words = bundle.words(name)
        if shuffle_seed is not None:
            shuffled = words.words.copy()
            np.random.default_rng(shuffle_seed).shuffle(shuffled)
            words = WordStream(shuffled, words.interpretation)
        row = _measure_row(name, bundle.record(name).encoding, words)
        rows.append(row)
    return {"rows": rows, "aggregate": _aggregate(rows), "shuffle_seed": shuffle_seed}


def report_bundle(
    bundle: Bundle,
    scheme_names: list[str],
    shuffle_seed: int | None = None,
) -> dict:
    """Apply each scheme to each 8-bit tensor and tabulate reductions.

    Stored encodings are decoded first, so schemes always apply to the raw
    domain.  With ``shuffle_seed``, words are shuffled once before coding.
    A scheme inapplicable to some tensor (e.g. sign-magnitude over a stream
    containing 0x80) yields a row with an ``error`` field instead of metrics.
    """
    rows = []
    for name in _eligible(bundle):
        rec = bundle.record(name)
        raw = _raw_words(bundle, name)
        if shuffle_seed is not None:
            shuffled = raw.words.copy()
            np.random.default_rng(shuffle_seed).shuffle(shuffled)
            raw = WordStream(shuffled, raw.interpretation)
        tensor_rows = []
        raw_row = None
        for scheme_name in scheme_names:
            try:
                scheme = CodingScheme.parse(scheme_name, zp=rec.zp_word)
                coded = codec.apply_scheme(scheme, raw, "encode")
                row = _measure_row(name, scheme.name(), coded)
            except Exception as exc:
                tensor_rows.append({"tensor": name, "scheme": scheme_name, "error": str(exc)})
                continue
            if scheme_name == "raw":
                raw_row = row
            tensor_rows.append(row)
        if raw_row is not None:
            for row in tensor_rows:
                if "error" in row or row["T"] is None or raw_row["T"] is None:
                    continue
                row["switching_delta_vs_raw_pp"] = (
                    row["switching_reduction_pct"] - raw_row["switching_reduction_pct"]
                )
                row["bitprob_delta_vs_raw_pp"] = (
                    row["bitprob_reduction_pct"] - raw_row["bitprob_reduction_pct"]
                )
        rows.extend(tensor_rows)
    return {
        "rows": rows,
        "aggregate": _aggregate(rows),
        "schemes": list(scheme_names),
        "shuffle_seed": shuffle_seed,
    }


def _aggregate(rows: list[dict]) -> list[dict]:
    """Word-count-weighted whole-bundle rows, one per scheme."""
    by_scheme: dict[str, list[dict]] = {}
    for row in rows:
        if "error" in row:
            continue
        by_scheme.setdefault(row["scheme"], []).append(row)
    out = []
    for scheme_name, group in by_scheme.items():
        n = sum(r["n_words"] for r in group)
        if n == 0:
            continue
        pr1 = sum(r["PR1"] * r["n_words"] for r in group) / n
        have_t = [r for r in group if r["T"] is not None]
        if have_t:
            nt = sum(r["n_words"] for r in have_t)
            t = sum(r["T"] * r["n_words"] for r in have_t) / nt
        else:
            t = None
        out.append(
            {
                "tensor": "<aggregate>",
                "scheme": scheme_name,
                "n_words": n,
                "T": t,
                "PR1": pr1,
                "switching_reduction_pct": None if t is None else (t / 4.0 - 1.0) * 100.0,
                "bitprob_reduction_pct": (pr1 / 4.0 - 1.0) * 100.0,
            }
        )
    return out


def report_to_csv(doc: dict) -> str:
    """Flatten a report/analysis document to CSV (aggregate rows last)."""
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in list(doc["rows"]) + list(doc.get("aggregate", [])):
        cells = []
        for col in CSV_COLUMNS:
            v = row.get(col)
            cells.append("" if v is None else repr(v) if isinstance(v, float) else str(v))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()
