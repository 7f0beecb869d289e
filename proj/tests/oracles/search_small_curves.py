"""Brute-force search for small test curves (Edwards toy with cofactor 4,
Weierstrass toy with large embedding degree). Output is frozen into tests."""


def is_prime(n):
    return n > 1 and all(n % i for i in range(2, int(n ** 0.5) + 1))


def ed_points(p, d):
    pts = []
    for x in range(p):
        for y in range(p):
            if (x * x + y * y - 1 - d * x * x * y * y) % p == 0:
                pts.append((x, y))
    return pts


def ed_add(p, d, a, b):
    x1, y1 = a
    x2, y2 = b
    t = d * x1 * x2 * y1 * y2 % p
    return ((x1 * y2 + y1 * x2) * pow(1 + t, -1, p) % p,
            (y1 * y2 - x1 * x2) * pow(1 - t, -1, p) % p)


def ed_order(p, d, pt):
    acc, k = pt, 1
    while acc != (0, 1):
        acc = ed_add(p, d, acc, pt)
        k += 1
    return k


def embedding(p, n, bound=200):
    for k in range(2, bound + 1):
        if (p ** k - 1) % n == 0:
            return k
    return None


for p in [q for q in range(50, 200) if is_prime(q) and q % 4 == 3]:
    found = False
    for d in range(2, p):
        if pow(d, (p - 1) // 2, p) == 1:
            continue  # need a non-square d
        pts = ed_points(p, d)
        N = len(pts)
        if N % 4 or not is_prime(N // 4) or N // 4 < 11:
            continue
        q = N // 4
        for pt in pts:
            if ed_order(p, d, pt) == q:
                print(f"edwards p={p} d={d} #E={N} n={q} G={pt} embedding={embedding(p, q)}")
                small = [s for s in pts if s != (0, 1) and ed_order(p, d, s) in (2, 4)]
                print("  small-order points:", small)
                found = True
                break
        if found:
            break
    if found:
        break

# Weierstrass curve with prime order and embedding degree > 20.
for p in [q for q in range(20, 120) if is_prime(q)]:
    done = False
    for a in range(p):
        for b in range(1, p):
            if (4 * a ** 3 + 27 * b * b) % p == 0:
                continue
            pts = [(x, y) for x in range(p) for y in range(p)
                   if (y * y - x ** 3 - a * x - b) % p == 0]
            n = len(pts) + 1
            if is_prime(n) and n != p:
                e = embedding(p, n, 1000)
                if e and e > 20:
                    print(f"weierstrass p={p} a={a} b={b} n={n} embedding={e} G={pts[0]}")
                    done = True
                    break
        if done:
            break
    if done:
        break
