from fractions import Fraction

from django.test import SimpleTestCase
from mpmath import iv

from internal.verifier.errors import DomainError, PrecisionError
from internal.verifier.precision import (
    PrecisionContext,
    certainly_less,
    certified_floor,
    decimal_string,
    enclosure_strings,
    excludes_zero,
    floor_of_upper,
    interval,
    parse_decimal_fraction,
    parse_scale,
    scientific,
    working_precision,
)


class PrecisionContextTests(SimpleTestCase):
    def test_rejects_low_precision(self):
        with self.assertRaises(DomainError):
            PrecisionContext(bits=64)

    def test_for_k_exceeds_k(self):
        self.assertEqual(PrecisionContext.for_k(3).bits, 256)
        self.assertEqual(PrecisionContext.for_k(1000).bits, 1064)

    def test_for_scale_tracks_bit_length(self):
        C = 10**100
        self.assertEqual(PrecisionContext.for_scale(C).bits, C.bit_length() + 64)

    def test_doubled_and_at_least(self):
        prec = PrecisionContext(256)
        self.assertEqual(prec.doubled().bits, 512)
        self.assertIs(prec.at_least(128), prec)
        self.assertEqual(prec.at_least(300).bits, 300)

    def test_working_precision_restores(self):
        before = iv.prec
        with working_precision(400):
            self.assertEqual(iv.prec, 400)
        self.assertEqual(iv.prec, before)


class CertifiedComparisonTests(SimpleTestCase):
    def test_undecided_comparison_is_not_certain(self):
        with working_precision(128):
            wide = iv.mpf([1, 3])
            self.assertFalse(certainly_less(wide, 2))
            self.assertFalse(certainly_less(2, wide))
            self.assertTrue(certainly_less(wide, 4))

    def test_excludes_zero(self):
        with working_precision(128):
            self.assertTrue(excludes_zero(iv.mpf([-3, -1])))
            self.assertFalse(excludes_zero(iv.mpf([-1, 1])))

    def test_certified_floor(self):
        with working_precision(128):
            self.assertEqual(certified_floor(interval(Fraction(7, 2))), 3)
            self.assertEqual(certified_floor(interval(Fraction(-7, 2))), -4)
            with self.assertRaises(PrecisionError):
                certified_floor(iv.mpf(["2.9", "3.1"]))
            self.assertEqual(floor_of_upper(iv.mpf(["2.9", "3.1"])), 3)


class ParsingTests(SimpleTestCase):
    def test_parse_scale_is_exact(self):
        self.assertEqual(parse_scale("1.3e867"), 13 * 10**866)
        self.assertEqual(parse_scale("2.1e178"), 21 * 10**177)
        self.assertEqual(parse_scale(12), 12)

    def test_parse_scale_rejects_fractions_and_negatives(self):
        for text in ("2.5", "-1", "0", "abc", "inf"):
            with self.subTest(text=text), self.assertRaises(DomainError):
                parse_scale(text)

    def test_parse_decimal_fraction(self):
        self.assertEqual(parse_decimal_fraction("1.81e59"), Fraction(181 * 10**57))
        self.assertEqual(parse_decimal_fraction("0.25"), Fraction(1, 4))

    def test_scientific(self):
        self.assertEqual(scientific(parse_scale("1.3e867"), 2), "1.3e+867")


class RenderingTests(SimpleTestCase):
    def test_enclosure_rounds_outward(self):
        with working_precision(128):
            two_thirds = interval(Fraction(2, 3))
            negative = interval(Fraction(-2, 3))
        self.assertEqual(enclosure_strings(two_thirds, 5), {"lower": "0.66666", "upper": "0.66667"})
        self.assertEqual(enclosure_strings(negative, 5), {"lower": "-0.66667", "upper": "-0.66666"})

    def test_enclosure_contains_value(self):
        with working_precision(128):
            root = iv.sqrt(interval(2))
        printed = enclosure_strings(root, 12)
        self.assertEqual(printed, {"lower": "1.41421356237", "upper": "1.41421356238"})
        self.assertLessEqual(Fraction(printed["lower"]) ** 2, 2)
        self.assertGreaterEqual(Fraction(printed["upper"]) ** 2, 2)

    def test_decimal_string_ignores_digit_cap(self):
        self.assertEqual(len(decimal_string(10**5000)), 5001)
