#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twistfactor/attacks.hpp"
#include "twistfactor/cli.hpp"
#include "twistfactor/io.hpp"
#include "twistfactor/twist_algebra.hpp"

namespace py = pybind11;
using namespace twistfactor;

// Python int <-> mpz_class through decimal text. bool is refused so that
// True never silently becomes 1.
namespace pybind11::detail {
template <>
struct type_caster<Int> {
  PYBIND11_TYPE_CASTER(Int, const_name("int"));

  bool load(handle src, bool) {
    if (!src || !PyLong_Check(src.ptr()) || PyBool_Check(src.ptr())) return false;
    value = parse_int(std::string(py::str(src)));
    return true;
  }

  static handle cast(const Int& v, return_value_policy, handle) {
    return PyLong_FromString(to_dec(v).c_str(), nullptr, 10);
  }
};
}  // namespace pybind11::detail

namespace {

Convention convention_from(const std::string& name) {
  if (name == "affine") return Convention::affine;
  if (name == "projective") return Convention::projective;
  throw Error(ErrorCode::invalid_argument, "convention must be affine or projective");
}

py::dict quadruple_dict(const TwistQuadruple& t) {
  py::dict d;
  d["e"] = t.e;
  d["e_hat"] = t.e_hat;
  d["e_tilde"] = t.e_tilde;
  d["e_bar"] = t.e_bar;
  d["pq"] = t.pq;
  return d;
}

py::tuple factor_tuple(const FactorResult& r) { return py::make_tuple(r.p, r.q, r.ap, r.aq); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Factoring RSA moduli from elliptic curve point counts";

  // Instances get a `code` attribute holding the ErrorCode name. The type
  // is leaked on purpose: it must outlive interpreter teardown.
  static py::handle error_type = py::exception<Error>(m, "TwistFactorError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(std::string(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("is_prime", [](const Int& n) { return is_prime(n); });
  m.def("factor", [](const Int& n) {
    const FactoredInteger f = factor(n);
    std::vector<std::pair<Int, unsigned>> out;
    for (const PrimePower& pp : f.factors()) out.emplace_back(pp.prime, pp.exponent);
    return out;
  }, py::arg("n"), "Prime factorization as [(prime, exponent), ...], ascending.");

  m.def("count_points", [](const Int& a, const Int& b, const Int& p, const Int& q) {
    const CountsModN c = count_points_modN(make_curve(a, b, p * q), p, q);
    return py::make_tuple(c.affine, c.projective);
  }, py::arg("a"), py::arg("b"), py::arg("p"), py::arg("q"),
     "(affine, projective) counts of y^2 = x^3 + a x + b modulo p q.");

  m.def("quadruple_from_traces",
        [](const Int& p, const Int& q, const Int& ap, const Int& aq, const std::string& conv) {
          return quadruple_dict(quadruple_from_traces(p, q, ap, aq, convention_from(conv)));
        },
        py::arg("p"), py::arg("q"), py::arg("ap"), py::arg("aq"),
        py::arg("convention") = "affine");

  m.def("factor_affine_pair", [](const Int& n, const Int& e, const Int& e_d) {
    return factor_tuple(factor_affine_pair(n, e, e_d));
  }, py::arg("n"), py::arg("e"), py::arg("e_d"), "(p, q, ap, aq) from affine counts.");

  m.def("factor_projective_pair", [](const Int& n, const Int& e, const Int& e_d) {
    return factor_tuple(factor_projective_pair(n, e, e_d));
  }, py::arg("n"), py::arg("e"), py::arg("e_d"), "(p, q, ap, aq) from projective counts.");

  m.def("lll_reduce", [](const std::vector<std::vector<Int>>& rows, const Int& num, const Int& den) {
    return lll_reduce(IntMatrix(rows), Rational(num, den)).data();
  }, py::arg("rows"), py::arg("delta_num") = 3, py::arg("delta_den") = 4);

  m.def("fermat_factor", [](const Int& n, std::uint64_t cap) -> py::object {
    const auto r = fermat_factor(n, cap);
    if (!r) return py::none();
    return py::make_tuple(r->p, r->q, r->iterations);
  }, py::arg("n"), py::arg("cap"));

  // JSON-shaped results travel as text; the Python package decodes them.
  m.def("random_instance_json", [](unsigned bits, std::uint64_t seed, bool synthetic, bool close) {
    InstanceOptions o;
    o.mode = synthetic ? InstanceMode::synthetic : InstanceMode::counted;
    o.close_primes = close;
    return to_text(instance_to_json(random_instance(bits, seed, o)));
  }, py::arg("bits"), py::arg("seed"), py::arg("synthetic") = false, py::arg("close") = false);

  m.def("malleability_attack_json", [](const Int& n, const Int& count, const std::string& conv) {
    const Convention c = convention_from(conv);
    return to_text(report_to_json(malleability_attack(n, factor(count), c), true));
  }, py::arg("n"), py::arg("count"), py::arg("convention") = "affine");

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line interface in-process: (exit_code, stdout, stderr).");
}
