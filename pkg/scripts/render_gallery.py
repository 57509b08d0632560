"""Render a small gallery of planar stage covers to PGM images.

Writes one image per named set into --outdir, plus the .frx source next
to it so any image can be regenerated or re-evaluated with the CLI:

    python3 scripts/render_gallery.py --outdir gallery --resolution 243
"""

import argparse
import pathlib
import sys
from fractions import Fraction

from fractalforge.build import ConstructionRequest, thm34
from fractalforge.cli import cli_main
from fractalforge.frx import emit_frx, parse_frx

MT = "cantor(s=1, beta=1/3, l=0)"

GALLERY = [
    ("dust_square", f"product({MT}, {MT})", 4),
    ("dust_rect", f"product({MT}, cantor(s=2, beta=1/9, l=0))", 3),
    ("fat_square", "product(cantor(s=1, beta=1/4, l=1/2), cantor(s=1, beta=1/4, l=1/2))", 4),
    ("pruned_square", f"prune(product({MT}, {MT}), seed=7)", 4),
    ("mirrored_band", f"product(symmetrize(cantor(s=1, beta=1/4, l=0)), {MT})", 4),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="gallery")
    ap.add_argument("--resolution", type=int, default=243)
    ap.add_argument("--seed", type=int, default=42, help="prune seed for the built-in family")
    args = ap.parse_args(argv)

    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    items = list(GALLERY)
    family = thm34(ConstructionRequest(r=Fraction(3, 2), l=0, n=2, prune_seed=args.seed, truncation=2))
    items.append(("main_family", emit_frx(family), 3))

    for name, text, stage in items:
        parse_frx(text)  # fail early on any bad entry
        src = out / f"{name}.frx"
        src.write_text(text + "\n")
        img = out / f"{name}.pgm"
        rc = cli_main([
            "render", str(src), "--stage", str(stage),
            "--resolution", str(args.resolution), "--out", str(img),
        ])
        if rc != 0:
            return rc
        print(f"wrote {img} (stage {stage}, {args.resolution}x{args.resolution})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
