import hashlib

import pytest

from ibaka.group import IDENTITY, TOY_CURVE
from ibaka.ibs import (
    DOMAIN_H1,
    InvalidIdentity,
    Signature,
    Variant,
    digest_to_scalar,
    extract_key,
    h1_scalar,
    hash_fields,
    identity_bytes,
    pkg_setup,
    sign,
    verify_signature,
)
from ibaka.rand import DeterministicRandom

SERVER = "server-1"
CLIENT = "sensor-7"


class ScalarSequence:
    """Random-source stand-in that hands out preset scalars."""

    def __init__(self, *values):
        self._values = list(values)

    def scalar(self, q):
        return self._values.pop(0)


def make_signer(seed=1, identity=SERVER):
    rng = DeterministicRandom(seed)
    master = pkg_setup(TOY_CURVE, rng)
    return master, extract_key(master, identity, rng), rng


def test_hash_layout_frozen():
    # 1-byte domain prefix, then 2-byte big-endian length before each field.
    manual = hashlib.sha256(b"\x02" + b"\x00\x02ab" + b"\x00\x01c").digest()
    assert hash_fields(0x02, b"ab", b"c") == manual


def test_digest_to_scalar_is_big_endian_mod_q():
    digest = bytes(range(32))
    assert digest_to_scalar(digest, 19) == int.from_bytes(digest, "big") % 19


class TestIdentity:
    def test_plain_label(self):
        assert identity_bytes("server-1") == b"server-1"

    def test_empty_rejected(self):
        with pytest.raises(InvalidIdentity):
            identity_bytes("")

    def test_non_text_rejected(self):
        with pytest.raises(InvalidIdentity):
            identity_bytes(b"server-1")

    def test_utf8_length_limit(self):
        assert len(identity_bytes("x" * 255)) == 255
        with pytest.raises(InvalidIdentity):
            identity_bytes("x" * 256)
        # Multi-byte characters count in bytes, not code points.
        with pytest.raises(InvalidIdentity):
            identity_bytes("é" * 200)


class TestPkgSetup:
    def test_forced_unit_scalar_gives_generator(self):
        master = pkg_setup(TOY_CURVE, ScalarSequence(1))
        assert master.public == TOY_CURVE.gen

    def test_same_seed_same_keys(self):
        a = pkg_setup(TOY_CURVE, DeterministicRandom(99))
        b = pkg_setup(TOY_CURVE, DeterministicRandom(99))
        assert (a.secret, a.public) == (b.secret, b.public)

    def test_public_matches_repeated_addition(self):
        master = pkg_setup(TOY_CURVE, DeterministicRandom(4))
        acc = IDENTITY
        for _ in range(master.secret):
            acc = TOY_CURVE.add(acc, TOY_CURVE.gen)
        assert master.public == acc


class TestExtractKey:
    def test_extraction_consistency(self):
        # s*gen == R + c*master_public for every extracted key.
        for seed in range(1, 30):
            master, keys, _ = make_signer(seed)
            c = h1_scalar(TOY_CURVE, keys.identity, keys.R)
            lhs = TOY_CURVE.mul(keys.secret, TOY_CURVE.gen)
            rhs = TOY_CURVE.add(keys.R, TOY_CURVE.mul(c, master.public))
            assert lhs == rhs

    def test_deterministic(self):
        _, a, _ = make_signer(12)
        _, b, _ = make_signer(12)
        assert a == b

    def test_distinct_identities_distinct_extraction_scalars(self):
        master, _, _ = make_signer(1)
        rng = ScalarSequence(5, 5)  # same r, so R is identical for both
        ka = extract_key(master, SERVER, rng)
        kb = extract_key(master, CLIENT, rng)
        digest_a = hash_fields(DOMAIN_H1, identity_bytes(SERVER), TOY_CURVE.encode_point(ka.R))
        digest_b = hash_fields(DOMAIN_H1, identity_bytes(CLIENT), TOY_CURVE.encode_point(kb.R))
        assert digest_a != digest_b
        assert h1_scalar(TOY_CURVE, SERVER, ka.R) != h1_scalar(TOY_CURVE, CLIENT, kb.R)

    def test_invalid_identity_rejected(self):
        master, _, rng = make_signer(1)
        with pytest.raises(InvalidIdentity):
            extract_key(master, "", rng)


def seeded_signature(seed, variant, ticks=100):
    master, keys, rng = make_signer(seed)
    y = rng.scalar(TOY_CURVE.q)
    Y = TOY_CURVE.mul(y, TOY_CURVE.gen)
    sig, X = sign(keys, CLIENT, Y, ticks, variant, rng)
    return master, keys, Y, sig, X


class TestSignVerify:
    @pytest.mark.parametrize("variant", list(Variant))
    def test_round_trip(self, variant):
        for seed in range(1, 50):
            master, keys, Y, sig, _ = seeded_signature(seed, variant)
            assert verify_signature(
                TOY_CURVE, sig, SERVER, CLIENT, Y, 100, master.public, variant
            )

    @pytest.mark.parametrize("variant", list(Variant))
    def test_recovery_identity_exact(self, variant):
        # mu*gen - h*(R + c*master_public) must equal X as a point.
        for seed in range(1, 50):
            master, keys, Y, sig, X = seeded_signature(seed, variant)
            c = h1_scalar(TOY_CURVE, SERVER, sig.R)
            h_q = digest_to_scalar(sig.h, TOY_CURVE.q)
            anchor = TOY_CURVE.add(sig.R, TOY_CURVE.mul(c, master.public))
            recovered = TOY_CURVE.add(
                TOY_CURVE.mul(sig.mu, TOY_CURVE.gen),
                TOY_CURVE.negate(TOY_CURVE.mul(h_q, anchor)),
            )
            assert recovered == X

    def test_flawed_signature_ignores_timestamp(self):
        # Same ephemeral x, different t: byte-identical signatures.
        master, keys, rng = make_signer(3)
        Y = TOY_CURVE.mul(5, TOY_CURVE.gen)
        sig_a, _ = sign(keys, CLIENT, Y, 100, Variant.FLAWED, ScalarSequence(7))
        sig_b, _ = sign(keys, CLIENT, Y, 999, Variant.FLAWED, ScalarSequence(7))
        assert sig_a == sig_b

    def test_fixed_signature_binds_timestamp(self):
        master, keys, rng = make_signer(3)
        Y = TOY_CURVE.mul(5, TOY_CURVE.gen)
        sig_a, _ = sign(keys, CLIENT, Y, 100, Variant.FIXED, ScalarSequence(7))
        sig_b, _ = sign(keys, CLIENT, Y, 999, Variant.FIXED, ScalarSequence(7))
        assert sig_a.h != sig_b.h

    def test_flawed_timestamp_swap_still_verifies(self):
        master, keys, Y, sig, _ = seeded_signature(8, Variant.FLAWED, ticks=100)
        for t in (0, 100, 999, 2 ** 40):
            assert verify_signature(
                TOY_CURVE, sig, SERVER, CLIENT, Y, t, master.public, Variant.FLAWED
            )

    def test_fixed_timestamp_swap_fails(self):
        master, keys, Y, sig, _ = seeded_signature(8, Variant.FIXED, ticks=100)
        assert verify_signature(
            TOY_CURVE, sig, SERVER, CLIENT, Y, 100, master.public, Variant.FIXED
        )
        for t in (0, 99, 101, 999):
            assert not verify_signature(
                TOY_CURVE, sig, SERVER, CLIENT, Y, t, master.public, Variant.FIXED
            )

    def test_wrong_recipient_fails(self):
        master, keys, Y, sig, _ = seeded_signature(5, Variant.FLAWED)
        assert not verify_signature(
            TOY_CURVE, sig, SERVER, "sensor-8", Y, 100, master.public, Variant.FLAWED
        )

    def test_wrong_sender_fails(self):
        master, keys, Y, sig, _ = seeded_signature(5, Variant.FLAWED)
        assert not verify_signature(
            TOY_CURVE, sig, "server-2", CLIENT, Y, 100, master.public, Variant.FLAWED
        )

    def test_wrong_ephemeral_point_fails(self):
        master, keys, Y, sig, _ = seeded_signature(5, Variant.FLAWED)
        other = TOY_CURVE.add(Y, TOY_CURVE.gen)
        assert not verify_signature(
            TOY_CURVE, sig, SERVER, CLIENT, other, 100, master.public, Variant.FLAWED
        )

    def test_tampered_mu_fails(self):
        master, keys, Y, sig, _ = seeded_signature(5, Variant.FLAWED)
        bad = Signature(sig.h, (sig.mu + 1) % TOY_CURVE.q, sig.R)
        assert not verify_signature(
            TOY_CURVE, bad, SERVER, CLIENT, Y, 100, master.public, Variant.FLAWED
        )

    def test_tampered_digest_fails(self):
        master, keys, Y, sig, _ = seeded_signature(5, Variant.FLAWED)
        flipped = bytes([sig.h[0] ^ 0x01]) + sig.h[1:]
        bad = Signature(flipped, sig.mu, sig.R)
        assert not verify_signature(
            TOY_CURVE, bad, SERVER, CLIENT, Y, 100, master.public, Variant.FLAWED
        )

    def test_malformed_signature_shapes_fail(self):
        master, keys, Y, sig, _ = seeded_signature(5, Variant.FLAWED)
        identity_r = Signature(sig.h, sig.mu, IDENTITY)
        short_h = Signature(sig.h[:16], sig.mu, sig.R)
        big_mu = Signature(sig.h, TOY_CURVE.q, sig.R)
        for bad in (identity_r, short_h, big_mu):
            assert not verify_signature(
                TOY_CURVE, bad, SERVER, CLIENT, Y, 100, master.public, Variant.FLAWED
            )
