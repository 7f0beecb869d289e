"""Independent reference values frozen into the C++ test suite.

Run with python3; nothing here shares code with the library.
"""
import hashlib

# Toy curve y^2 = x^3 + 2x + 2 over F_17.
P, A, B = 17, 2, 2
G = (5, 1)
O = None


def on_curve(pt):
    x, y = pt
    return (y * y - (x ** 3 + A * x + B)) % P == 0


def add(p1, p2):
    if p1 is O:
        return p2
    if p2 is O:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2 and (y1 + y2) % P == 0:
        return O
    if p1 == p2:
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, P) % P
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    return (x3, (lam * (x1 - x3) - y1) % P)


points = [(x, y) for x in range(P) for y in range(P) if on_curve((x, y))]
group = [O] + points
print("toy points (excluding O):", len(points), "group order:", len(group))
mult = {}
acc = O
k = 0
while True:
    acc = add(acc, G)
    k += 1
    mult[k] = acc
    if acc is O:
        break
n = k
print("order of G:", n)
print("multiples:", [mult[i] for i in range(1, n)])
print("2G:", add(G, G))
print("15G:", mult[15 % n], "3G:", mult[3], "5G:", mult[5])
for k in range(2, 200):
    if (P ** k - 1) % n == 0:
        print("toy embedding degree:", k)
        break

# Ed448-Goldilocks (untwisted Edwards, a = 1).
p448 = 2 ** 448 - 2 ** 224 - 1
d = -39081 % p448
gx = 224580040295924300187604334099896036246789641632564134246125461686950415467406032909029192869357953282578032075146446173674602635247710
gy = 298819210078481492676017930443930673437544040154080242095928241372331506189835876003536878655418784733982303233503462500531545062832660
L = 2 ** 446 - 13818066809895115352007386748515426880336692474882178609894547503885
print("L =", L)
print("G on x^2+y^2=1+dx^2y^2:", (gx * gx + gy * gy - 1 - d * gx * gx * gy * gy) % p448 == 0)
print("G on -x^2+y^2=1+dx^2y^2:", (-gx * gx + gy * gy - 1 - d * gx * gx * gy * gy) % p448 == 0)


def ed_add(p1, p2):
    x1, y1 = p1
    x2, y2 = p2
    t = d * x1 * x2 * y1 * y2 % p448
    x3 = (x1 * y2 + y1 * x2) * pow(1 + t, -1, p448) % p448
    y3 = (y1 * y2 - x1 * x2) * pow(1 - t, -1, p448) % p448
    return (x3, y3)


def ed_mul(k, pt):
    r = (0, 1)
    while k:
        if k & 1:
            r = ed_add(r, pt)
        pt = ed_add(pt, pt)
        k >>= 1
    return r


print("L*G == identity:", ed_mul(L, (gx, gy)) == (0, 1))
print("ed448 2G:", ed_add((gx, gy), (gx, gy)))
print("ed448 7G:", ed_mul(7, (gx, gy)))
# p^k mod L for small k never 1 (MOV)
print("ed448 embedding degree <= 100:", any(pow(p448, k, L) == 1 for k in range(2, 101)))

# KDF: PBKDF2-HMAC-SHA512, 16 iterations, empty salt, 16-byte output.
def kdf(seed):
    return hashlib.pbkdf2_hmac("sha512", seed, b"", 16, 16).hex()

print("kdf(x=15G_x single byte):", kdf(bytes([mult[15][0]])))
print("kdf(b'lakee'):", kdf(b"lakee"))
print("kdf(0x00..0x37):", kdf(bytes(range(56))))
print("sha1(8 zero bytes):", hashlib.sha1(bytes(8)).hexdigest())
print("sha1(0x0102030405060708):", hashlib.sha1(bytes.fromhex("0102030405060708")).hexdigest())
