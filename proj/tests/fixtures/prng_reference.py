"""Reference expander for PRNG_EXPANSION payloads; writes prng_golden.txt.

Line format: seed_hex seed_bits n m code_0 ... code_{n-1}
"""

MASK = (1 << 64) - 1


def splitmix64(x):
    z = (x + 0x9E3779B97F4A7C15) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def expand(seed, seed_bits, n, m):
    state = splitmix64(splitmix64(seed_bits) ^ seed) or 0x9E3779B97F4A7C15
    bits = []
    while len(bits) < n * m:
        state ^= (state << 13) & MASK
        state ^= state >> 7
        state ^= (state << 17) & MASK
        word = (state * 0x2545F4914F6CDD1D) & MASK
        bits.extend((word >> (63 - i)) & 1 for i in range(64))
    codes = []
    for c in range(n):
        v = 0
        for b in bits[c * m:(c + 1) * m]:
            v = (v << 1) | b
        codes.append(v)
    return codes


CASES = [
    (0xAB, 8, 8, 4),
    (0x0, 1, 16, 3),
    (0x1, 1, 16, 3),
    (0xFFFF, 16, 5, 11),
    (0x1234, 13, 40, 6),
    ((1 << 64) - 1, 64, 4, 53),
]

if __name__ == "__main__":
    with open("prng_golden.txt", "w") as out:
        for seed, s, n, m in CASES:
            out.write(f"{seed:x} {s} {n} {m} " + " ".join(map(str, expand(seed, s, n, m))) + "\n")
