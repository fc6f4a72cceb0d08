"""From landmark frames to trainable images.

Generates a few synthetic gesture captures, shows how a capture's 30 frames
become one 90x21 motion matrix, and writes a PGM you can open in any image
viewer. Run from the repository root:

    python3 demos/01_dataset_and_matrices.py
"""

from pathlib import Path

import numpy as np

from signstream import (
    GestureClass,
    encode,
    frames_to_matrix,
    generate_dataset,
    serialize_frame,
    write_capture,
    write_pgm,
)

out_dir = Path("demo_out")
out_dir.mkdir(exist_ok=True)

captures = generate_dataset(seed=42, captures_per_class=1)
print(f"generated {len(captures)} captures, one per class plus extra neutrals")

by_class = {c.label: c for c in captures}
toggle = by_class[GestureClass.TOGGLE]
neutral = by_class[GestureClass.NEUTRAL]

print("\nA capture is 30 timestamped frames of 21 (x, y, z) keypoints.")
print("First frame of the toggle capture, as it travels on the wire:")
print(" ", serialize_frame(toggle.frames[0])[:100], "...")

# The raw matrix stacks coordinate blocks: rows 0-29 hold x for each frame,
# rows 30-59 y, rows 60-89 z. Column j follows keypoint j through time.
raw = frames_to_matrix(toggle.frames)
print(f"\nraw motion matrix: shape {raw.shape}, values in [{raw.min():.3f}, {raw.max():.3f}]")

encoded = encode(toggle)
print(f"encoded (min-max normalized to 0..255): [{encoded.min():.1f}, {encoded.max():.1f}]")

# Movement shows up as vertical variation inside a column. The toggle
# gesture moves the fingertips a lot; a neutral pose barely moves at all.
def column_travel(capture):
    m = encode(capture)
    blocks = (m[0:30], m[30:60], m[60:90])
    return max(float((b.max(axis=0) - b.min(axis=0)).max()) for b in blocks)

print(f"\nlargest within-column travel, toggle:  {column_travel(toggle):6.1f} gray levels")
print(f"largest within-column travel, neutral: {column_travel(neutral):6.1f} gray levels")

for name, capture in (("toggle", toggle), ("neutral", neutral)):
    pgm = out_dir / f"{name}.pgm"
    write_pgm(encode(capture), pgm)
    write_capture(capture, out_dir / f"{name}.capture")
    print(f"wrote {pgm} and {out_dir / (name + '.capture')}")

print("\nOpen the PGMs side by side: the gesture is visibly 'drawn' into the image.")
