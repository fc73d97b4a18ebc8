/* Python bindings for the main library operations.
 *
 * Big integers cross the boundary as decimal strings (Python int <-> GMP
 * mpz), which keeps the glue trivially correct; the conversion cost is
 * negligible next to the arithmetic it wraps.  C++ exceptions surface with
 * pybind11's default mapping: domain/config errors become ValueError,
 * budget/window failures become RuntimeError. */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pi_forge/bbp.hpp"
#include "pi_forge/borwein.hpp"
#include "pi_forge/digits.hpp"
#include "pi_forge/fixedpoint.hpp"
#include "pi_forge/runner.hpp"
#include "pi_forge/salamin.hpp"

namespace py = pybind11;

namespace {

mpz_class to_mpz(const py::int_& v) {
    return mpz_class(py::str(v).cast<std::string>());
}

py::int_ to_pyint(const mpz_class& v) {
    PyObject* obj = PyLong_FromString(v.get_str().c_str(), nullptr, 10);
    if (obj == nullptr)
        throw py::error_already_set();
    return py::reinterpret_steal<py::int_>(obj);
}

pi_forge::Algorithm parse_algorithm(const std::string& name) {
    if (name == "borwein")
        return pi_forge::Algorithm::borwein;
    if (name == "salamin")
        return pi_forge::Algorithm::salamin;
    throw pi_forge::ConfigError("unknown algorithm '" + name +
                                "' (expected 'borwein' or 'salamin')");
}

/* The CLI's extraction protocol: start at the computed precision and
 * escalate by 4 bits while the agreement test withholds the digit. */
std::optional<unsigned> hex_digit(std::uint64_t position,
                                  unsigned precision_bits, unsigned threads) {
    if (precision_bits != 0)
        return pi_forge::pi_hex_digit(
            pi_forge::BbpParams{position, precision_bits}, threads);
    for (unsigned p = pi_forge::choose_precision(position);
         p <= pi_forge::kMaxPrecisionBits; p += 4) {
        std::optional<unsigned> d = pi_forge::pi_hex_digit(
            pi_forge::BbpParams{position, p}, threads);
        if (d)
            return d;
    }
    return std::nullopt;
}

} // namespace

PYBIND11_MODULE(pi_forge, m) {
    m.doc() = "pi to certified digit counts: quadratic product and AGM "
              "algorithms over fixed-point big integers, plus spigot "
              "hex-digit extraction";
    m.attr("__version__") = "1.0.0";

    m.def(
        "isqrt",
        [](const py::int_& n) { return to_pyint(pi_forge::isqrt(to_mpz(n))); },
        py::arg("n"),
        "floor(sqrt(n)) of a nonnegative integer of any size");

    m.def(
        "fx_mul",
        [](const py::int_& x, const py::int_& y, const py::int_& magnifier) {
            pi_forge::Magnifier m2(to_mpz(magnifier));
            pi_forge::FixedReal a{to_mpz(x), m2}, b{to_mpz(y), m2};
            return to_pyint(pi_forge::fx_mul(m2, a, b).mantissa);
        },
        py::arg("x"), py::arg("y"), py::arg("magnifier"),
        "fixed-point product of mantissas: floor(x*y/magnifier)");

    m.def(
        "fx_div",
        [](const py::int_& x, const py::int_& y, const py::int_& magnifier) {
            pi_forge::Magnifier m2(to_mpz(magnifier));
            pi_forge::FixedReal a{to_mpz(x), m2}, b{to_mpz(y), m2};
            return to_pyint(pi_forge::fx_div(m2, a, b).mantissa);
        },
        py::arg("x"), py::arg("y"), py::arg("magnifier"),
        "fixed-point quotient of mantissas: floor(x*magnifier/y)");

    m.def(
        "fx_sqrt",
        [](const py::int_& x, const py::int_& magnifier) {
            pi_forge::Magnifier m2(to_mpz(magnifier));
            pi_forge::FixedReal a{to_mpz(x), m2};
            return to_pyint(pi_forge::fx_sqrt(m2, a).mantissa);
        },
        py::arg("x"), py::arg("magnifier"),
        "fixed-point square root of a mantissa: isqrt(x*magnifier)");

    m.def("choose_precision", &pi_forge::choose_precision,
          py::arg("position"), py::arg("slack_bits") = 0,
          "working precision (bits, multiple of 4) the spigot extractor "
          "starts from for the given hex position");

    m.def("pi_hex_digit", &hex_digit, py::arg("position"),
          py::arg("precision_bits") = 0, py::arg("threads") = 1,
          "the 1-based hexadecimal digit of pi after the point, or None "
          "when the agreement test withholds it; precision_bits=0 picks "
          "the starting precision automatically and escalates");

    m.def("borwein_iterations_for", &pi_forge::borwein_iterations_for,
          py::arg("digits"), py::arg("base") = 10,
          "iteration count after which the product formula's truncation "
          "error drops below base^-digits");

    m.def("salamin_iterations_for", &pi_forge::salamin_iterations_for,
          py::arg("digits"), py::arg("base") = 10,
          "iteration count after which the AGM sum's truncation error "
          "drops below base^-digits");

    m.def(
        "compute_digits",
        [](std::uint64_t digits, unsigned base, const std::string& algorithm,
           unsigned guard_digits) {
            pi_forge::DigitReport rep = pi_forge::compute_digits(
                digits, base, parse_algorithm(algorithm), guard_digits);
            if (rep.verdict != pi_forge::Verdict::certified)
                throw pi_forge::BudgetError(
                    "certification withheld (guard remainder " +
                    rep.guard_remainder.get_str() + ", window bound " +
                    rep.window_bound.get_str() +
                    "); rerun with more guard digits");
            return rep.digit_string;
        },
        py::arg("digits"), py::arg("base") = 10,
        py::arg("algorithm") = std::string("salamin"),
        py::arg("guard_digits") = 0,
        "certified '3.<digits>' of pi in base 10 or 16; raises RuntimeError "
        "when the guard window cannot certify every digit");

    m.def(
        "crosscheck",
        [](const std::string& digit_string,
           const std::vector<std::uint64_t>& positions, unsigned threads) {
            pi_forge::CrosscheckResult res =
                pi_forge::crosscheck(digit_string, positions, threads);
            py::list rows;
            for (const pi_forge::CrosscheckEntry& e : res.entries) {
                py::dict row;
                row["position"] = e.position;
                row["file"] = e.file_digit;
                row["spigot"] = e.spigot_digit < 0
                                    ? py::object(py::none())
                                    : py::object(py::int_(e.spigot_digit));
                row["verdict"] =
                    e.verdict == pi_forge::CrossVerdict::match ? "match"
                    : e.verdict == pi_forge::CrossVerdict::mismatch
                        ? "mismatch"
                        : "inconclusive";
                rows.append(row);
            }
            return rows;
        },
        py::arg("digit_string"), py::arg("positions"), py::arg("threads") = 1,
        "spot-check a rendered hex digit string ('3.243F...') against the "
        "spigot extractor at 1-based positions");
}
