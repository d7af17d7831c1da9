#!/usr/bin/env python3
# Copyright (c) 2026 The burnscope developers
# Distributed under the MIT software license, see the accompanying
# file COPYING or http://www.opensource.org/licenses/mit-license.php.
"""Address vectors from the base58 and bech32 reference packages."""

import hashlib
import random

import base58
import bech32
from Crypto.Hash import RIPEMD160

NAMED = [
    "1594on5HBqWgpxLsvGKdijccdEpxJ5pjZV",
    "18N9jzCDsV9ekiLW8jJSA1rXDXw1Yx4hDh",
    "1DLA46sXYps3PdS3HpGfdt9MbQpo6FytPm",
    "1L5QKvh2Fc86j947rZt12rX1EFrCGb2uPf",
    "1EWr1L7BSzFGjk5sZz3zkq5US2x7aiQSJQ",
    "1AVNM68gj6PGPFcJuftKATa4WLnzg8fpfv",
]


BECH32M_CONST = 0x2BC830A3


def encode_bech32m(hrp: str, version: int, prog: bytes) -> str:
    # bech32 1.2.0 predates BIP350, so only the checksum constant is borrowed from it
    data = [version] + bech32.convertbits(prog, 8, 5)
    values = bech32.bech32_hrp_expand(hrp) + data
    mod = bech32.bech32_polymod(values + [0] * 6) ^ BECH32M_CONST
    checksum = [(mod >> 5 * (5 - i)) & 31 for i in range(6)]
    return hrp + "1" + "".join(bech32.CHARSET[d] for d in data + checksum)


def hash160(data: bytes) -> bytes:
    return RIPEMD160.new(hashlib.sha256(data).digest()).digest()


def main() -> None:
    for addr in NAMED:
        raw = base58.b58decode_check(addr)
        h = raw[1:]
        print(f"{addr} version={raw[0]:02x} hash160={h.hex()}")
        regtest = base58.b58encode_check(bytes([0x6F]) + h).decode()
        print(f"  regtest p2pkh {regtest}")
        print(f"  mainnet p2wpkh {bech32.encode('bc', 0, h)}")
        print(f"  regtest p2wpkh {bech32.encode('bcrt', 0, h)}")
    h = hash160(b"burnscope")
    print(f"hash160('burnscope')={h.hex()}")
    p2sh = base58.b58encode_check(bytes([0x05]) + h).decode()
    print(f"  p2sh {p2sh}")
    rng = random.Random(7)
    prog = bytes(rng.randrange(256) for _ in range(32))
    print(f"p2wsh program {prog.hex()} {bech32.encode('bc', 0, prog)}")
    print(f"p2tr  program {prog.hex()} {encode_bech32m('bc', 1, prog)}")
    # BIP350 reference: v1 program of 0x751e76e8199196d454941c45d1b3a323f1433bd6 repeated
    ref = bytes.fromhex("751e76e8199196d454941c45d1b3a323f1433bd6751e76e8199196d454941c45d1b3a323f1433bd6")
    print(f"bip350 check {encode_bech32m('bc', 1, ref)}")


if __name__ == "__main__":
    main()
