"""The exact image computation on the unramified character line.

Over a p-adic field the same averaging operator becomes a question about
induced representations of GL(n), answered by segment combinatorics with
no floating point at all.  For each (n, i) the image is either the whole
irreducible source or the unique irreducible submodule of a length-two
target; both cases are printed below.
"""
from grassint.zelevinsky import classify_image, grassmannian_segments, linked


def main():
    for n in (4, 5, 6):
        print(f"n = {n}")
        for i in range(1, n):
            d1, d1p, _, _ = grassmannian_segments(n, i)
            desc, image = classify_image(n, i)
            tag = "linked" if linked(d1, d1p) else "nested"
            print(f"  i={i}: {d1} / {d1p} ({tag:6s}) -> {desc.kind:10s} "
                  f"image {image}")
        print()


if __name__ == "__main__":
    main()
