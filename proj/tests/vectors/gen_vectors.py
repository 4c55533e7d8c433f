#!/usr/bin/env python3
"""Reference values for the fixed test vectors, computed with py_ecc.

    pip install py_ecc
    python3 tests/vectors/gen_vectors.py
"""
import hashlib

from py_ecc.bls.hash import expand_message_xmd
from py_ecc.bls.hash_to_curve import hash_to_G1
from py_ecc.bls.point_compression import compress_G1, compress_G2
from py_ecc.optimized_bls12_381 import G2, add, curve_order, multiply

H1_SUITE = b"PPLIST-H1_BLS12381G1_XMD:SHA-256_SSWU_RO_"


def u32(n):
    return n.to_bytes(4, "big")


def lp(b):
    return u32(len(b)) + b


def hash_to_scalar(tag, payload):
    wide = expand_message_xmd(tag + payload, tag, 64, hashlib.sha256)
    return int.from_bytes(wide, "big") % curve_order


def h3(x, m):
    return hash_to_scalar(b"PPLIST-H3", x.to_bytes(32, "big") + lp(m))


def h2(y, keys):
    payload = enc_g2(y) + u32(len(keys)) + b"".join(enc_g2(k) for k in keys)
    return hash_to_scalar(b"PPLIST-H2", payload)


def enc_g2(p):
    z1, z2 = compress_G2(p)
    return z1.to_bytes(48, "big") + z2.to_bytes(48, "big")


def enc_g1(p):
    return compress_G1(p).to_bytes(48, "big")


def h1(c1, c2, m):
    msg = b"PPLIST-H1" + lp(enc_g2(c1)) + lp(enc_g2(c2)) + lp(m)
    return hash_to_G1(msg, H1_SUITE, hashlib.sha256)


def main():
    xu, xt = 0x1234567, 0x89ABCDEF
    m = b"order-0001"
    k = h3(xu, m)
    c1 = multiply(G2, k)
    c2 = add(multiply(G2, (xt * k) % curve_order), multiply(G2, xu))
    print("k  =", f"{k:064x}")
    print("c1 =", enc_g2(c1).hex())
    print("c2 =", enc_g2(c2).hex())
    print("H1 =", enc_g1(h1(c1, c2, m)).hex())

    # two-station route with secrets 11, 13; signature on the record above
    xs = [11, 13]
    ys = [multiply(G2, x) for x in xs]
    hs = [h2(y, ys) for y in ys]
    ya = None
    for h, y in zip(hs, ys):
        term = multiply(y, h)
        ya = term if ya is None else add(ya, term)
    print("h  =", " ".join(f"{h:064x}" for h in hs))
    print("ya =", enc_g2(ya).hex())
    e = sum(h * x for h, x in zip(hs, xs)) % curve_order
    print("sig=", enc_g1(multiply(h1(c1, c2, m), e)).hex())


if __name__ == "__main__":
    main()
