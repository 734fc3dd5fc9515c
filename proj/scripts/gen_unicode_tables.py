#!/usr/bin/env python3
"""Regenerates src/core/unicode_data.inc from the Python unicodedata module.

Covers the Basic Multilingual Plane: compatibility decompositions, canonical
composition pairs, combining classes, simple lowercase mappings and
letter/digit ranges. Hangul composition is algorithmic and not tabulated.
"""
import sys
import unicodedata

BMP = 0x10000


def decomposition_map():
    out = {}
    for cp in range(BMP):
        if 0xAC00 <= cp <= 0xD7A3:  # Hangul: algorithmic
            continue
        ch = chr(cp)
        dec = unicodedata.normalize("NFKD", ch)
        if dec != ch:
            out[cp] = [ord(c) for c in dec]
    return out


def canonical_pairs():
    # first+second -> composed, excluding singletons and non-starter pairs
    pairs = []
    for cp in range(BMP):
        if 0xAC00 <= cp <= 0xD7A3:
            continue
        ch = chr(cp)
        raw = unicodedata.decomposition(ch)
        if not raw or raw.startswith("<"):
            continue
        parts = [int(p, 16) for p in raw.split()]
        if len(parts) != 2:
            continue
        if unicodedata.combining(chr(parts[0])) != 0:
            continue
        # composition exclusions show up as NFC(decomposed) != composed
        if unicodedata.normalize("NFC", "".join(chr(p) for p in parts)) != ch:
            continue
        pairs.append((parts[0], parts[1], cp))
    return pairs


def combining_classes():
    return [(cp, unicodedata.combining(chr(cp)))
            for cp in range(BMP) if unicodedata.combining(chr(cp)) != 0]


def lowercase_map():
    out = []
    for cp in range(BMP):
        lo = chr(cp).lower()
        if len(lo) == 1 and ord(lo) != cp:
            out.append((cp, ord(lo)))
    return out


def alnum_ranges():
    ranges = []
    start = None
    for cp in range(BMP + 1):
        is_alnum = cp < BMP and unicodedata.category(chr(cp))[0] in "LN"
        if is_alnum and start is None:
            start = cp
        elif not is_alnum and start is not None:
            ranges.append((start, cp - 1))
            start = None
    return ranges


def main(path):
    dec = decomposition_map()
    pairs = canonical_pairs()
    ccc = combining_classes()
    lower = lowercase_map()
    alnum = alnum_ranges()

    flat = []
    index = []
    for cp in sorted(dec):
        seq = dec[cp]
        index.append((cp, len(flat), len(seq)))
        flat.extend(seq)

    with open(path, "w") as f:
        w = f.write
        w("// Generated by scripts/gen_unicode_tables.py -- do not edit.\n")
        w("// Unicode version: %s\n" % unicodedata.unidata_version)
        w("static const char32_t kDecompFlat[] = {\n")
        for i in range(0, len(flat), 12):
            w("  " + ",".join("0x%X" % v for v in flat[i:i + 12]) + ",\n")
        w("};\n")
        w("static const DecompEntry kDecompIndex[] = {\n")
        for cp, off, n in index:
            w("  {0x%X,%d,%d},\n" % (cp, off, n))
        w("};\n")
        w("static const ComposeEntry kComposePairs[] = {\n")
        for a, b, c in sorted(pairs):
            w("  {0x%X,0x%X,0x%X},\n" % (a, b, c))
        w("};\n")
        w("static const CccEntry kCombiningClass[] = {\n")
        for cp, k in ccc:
            w("  {0x%X,%d},\n" % (cp, k))
        w("};\n")
        w("static const CaseEntry kLowercase[] = {\n")
        for cp, lo in lower:
            w("  {0x%X,0x%X},\n" % (cp, lo))
        w("};\n")
        w("static const RangeEntry kAlnumRanges[] = {\n")
        for a, b in alnum:
            w("  {0x%X,0x%X},\n" % (a, b))
        w("};\n")
    print("decomp entries:", len(index), "flat:", len(flat))
    print("compose pairs:", len(pairs), "ccc:", len(ccc),
          "lower:", len(lower), "alnum ranges:", len(alnum))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/core/unicode_data.inc")
