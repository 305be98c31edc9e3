"""Independent reference for the stream construction, used to freeze the
golden values in tests/unit/test_rng.cpp.

    h         = FNV-1a-64(label)
    initstate = splitmix64(seed ^ splitmix64(h))
    initseq   = splitmix64(h + 0x9E3779B97F4A7C15)
    pcg32_srandom(initstate, initseq)
    uniform01 = (u64 >> 11) * 2^-53, u64 = (first u32 << 32) | second u32
"""

M64 = (1 << 64) - 1


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data.encode():
        h = ((h ^ b) * 0x100000001B3) & M64
    return h


class Pcg32:
    def __init__(self, initstate, initseq):
        self.state = 0
        self.inc = ((initseq << 1) | 1) & M64
        self.u32()
        self.state = (self.state + initstate) & M64
        self.u32()

    def u32(self):
        old = self.state
        self.state = (old * 6364136223846793005 + self.inc) & M64
        xs = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xs >> rot) | (xs << ((-rot) & 31))) & 0xFFFFFFFF

    def u64(self):
        hi = self.u32()
        return (hi << 32) | self.u32()

    def uniform01(self):
        return (self.u64() >> 11) * 2.0 ** -53

    def uniform_int(self, lo, hi):
        bound = hi - lo + 1
        threshold = (2 ** 32 - bound) % bound
        while True:
            r = self.u32()
            if r >= threshold:
                return lo + r % bound


def derive(seed, label):
    h = fnv1a64(label)
    return Pcg32(splitmix64(seed ^ splitmix64(h)), splitmix64((h + 0x9E3779B97F4A7C15) & M64))


if __name__ == "__main__":
    p = Pcg32(42, 54)
    print("pcg32(42,54):", ", ".join(hex(p.u32()) for _ in range(6)))
    print("splitmix64(0) =", hex(splitmix64(0)), " splitmix64(42) =", hex(splitmix64(42)))
    print("fnv1a64('') =", hex(fnv1a64("")), " fnv1a64('a') =", hex(fnv1a64("a")))
    s = derive(42, "basic3/line/train/0")
    print("derive(42, basic3/line/train/0) u32:", ", ".join(hex(s.u32()) for _ in range(4)))
    s = derive(42, "basic3/line/train/0")
    print("  u64:", hex(s.u64()))
    s = derive(7, "regions36/r07_point_cluster/test/3")
    print("derive(7, regions36/...) uniform01:", ", ".join(repr(s.uniform01()) for _ in range(3)))
    s = derive(123456789, "diagnoses/pelvic_contusion/train/49")
    print("uniform_int(2,3) x8:", [s.uniform_int(2, 3) for _ in range(8)])
    print("  then uniform_int(3,20) x8:", [s.uniform_int(3, 20) for _ in range(8)])
