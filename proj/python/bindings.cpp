#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pmod2/certifier.hpp"
#include "pmod2/cli.hpp"
#include "pmod2/density.hpp"
#include "pmod2/partitions.hpp"

namespace py = pybind11;
using namespace pmod2;

namespace {

// Structured results cross the boundary as cert-v1 style JSON text; the
// Python side turns them into dicts.
std::string dumps(const nlohmann::ordered_json& j) { return j.dump(); }

std::string bit_string(const F2Series& f) {
  std::string s(f.trunc(), '0');
  for (std::size_t n = 0; n < f.trunc(); ++n) {
    if (f.bit(n)) s[n] = '1';
  }
  return s;
}

const char* shape_name(ClaimShape s) {
  switch (s) {
    case ClaimShape::TwoTerm:
      return "two-term";
    case ClaimShape::ThreeTerm:
      return "three-term";
    case ClaimShape::Auxiliary:
      return "auxiliary";
  }
  return "";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parity of multipartition functions: series mod 2, congruence checks, certificates";

  py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", m.attr("Error"));
  py::register_exception<UnknownCase>(m, "UnknownCase", m.attr("Error"));
  py::register_exception<ContractViolation>(m, "ContractViolation", m.attr("Error"));

  m.def(
      "parity_bits",
      [](const std::string& series, std::int64_t x) {
        if (x < 1) throw ContractViolation("x must be positive");
        return bit_string(series_bits(SeriesSpec::parse(series), static_cast<std::size_t>(x)));
      },
      py::arg("series"), py::arg("x"), "'0'/'1' string of parities for 0 <= n < x.");

  m.def(
      "odd_density_json",
      [](const std::string& series, std::int64_t x, unsigned threads) {
        py::gil_scoped_release release;
        return dumps(to_json(odd_density(SeriesSpec::parse(series), x, threads)));
      },
      py::arg("series"), py::arg("x"), py::arg("threads") = 1);

  m.def(
      "regular_relation_json",
      [](std::int64_t x, unsigned threads) {
        py::gil_scoped_release release;
        return dumps(to_json(regular_relation_check(x, threads)));
      },
      py::arg("x"), py::arg("threads") = 1);

  m.def(
      "landau_json",
      [](std::int64_t x, unsigned threads) {
        py::gil_scoped_release release;
        const DensityEstimate d = landau_check(x, threads);
        auto j = to_json(d);
        j["strictly_decreasing"] = strictly_decreasing(d);
        return dumps(j);
      },
      py::arg("x"), py::arg("threads") = 1);

  m.def(
      "conjecture_table_json",
      [](const std::vector<std::int64_t>& ts, std::int64_t x, unsigned threads) {
        py::gil_scoped_release release;
        auto arr = nlohmann::ordered_json::array();
        for (const ConjectureRow& r : conjecture_table(ts, x, threads)) arr.push_back(to_json(r));
        return dumps(arr);
      },
      py::arg("ts"), py::arg("x"), py::arg("threads") = 1);

  m.def("catalog", [] {
    py::list out;
    for (const CongruenceClaim& c : catalog()) {
      py::dict d;
      d["id"] = c.id;
      d["shape"] = shape_name(c.shape);
      d["a"] = c.a;
      d["b"] = c.b;
      d["t"] = c.t;
      d["description"] = c.description;
      d["lhs"] = [&] {
        py::list l;
        for (const Term& t : c.lhs) l.append(term_to_string(t));
        return l;
      }();
      d["rhs"] = [&] {
        py::list l;
        for (const Term& t : c.rhs) l.append(term_to_string(t));
        return l;
      }();
      out.append(d);
    }
    return out;
  });

  m.def(
      "verify",
      [](const std::string& id, std::int64_t terms) {
        const CongruenceClaim& c = find_claim(id);
        NumericResult r;
        {
          py::gil_scoped_release release;
          r = numeric_verify(c, terms);
        }
        py::dict d;
        d["case"] = c.id;
        d["terms"] = r.horizon;
        d["passed"] = r.passed;
        d["first_mismatch"] = r.first_mismatch ? py::object(py::int_(*r.first_mismatch)) : py::object(py::none());
        return d;
      },
      py::arg("case"), py::arg("terms") = 10000);

  m.def(
      "certify_json",
      [](const std::string& id, std::optional<std::int64_t> j, bool normalize) {
        CertifyOptions opt;
        opt.j_override = j;
        opt.normalizer_only = normalize;
        const CongruenceClaim& c = find_claim(id);
        py::gil_scoped_release release;
        return dumps(to_json(certify(c, opt)));
      },
      py::arg("case"), py::arg("j") = py::none(), py::arg("normalize") = false);

  m.def("sturm_bound", &sturm_bound, py::arg("weight2"), py::arg("level"), py::arg("same_character"));

  py::class_<EtaQuotient>(m, "EtaQuotient")
      .def(py::init<std::int64_t, ExponentMap>(), py::arg("level"), py::arg("exponents"))
      .def_static("parse", &EtaQuotient::parse)
      .def_property_readonly("level", &EtaQuotient::level)
      .def_property_readonly("exponents", &EtaQuotient::exps)
      .def_property_readonly("weight2", &EtaQuotient::weight2)
      .def("ghn", [](const EtaQuotient& e) {
        const ModularityReport r = ghn_check(e);
        py::dict d;
        d["is_form"] = r.is_form;
        d["weight2"] = r.weight2;
        d["character_kernel"] = r.char_s_kernel;
        d["cond_A"] = r.cond_A;
        d["cond_B"] = r.cond_B;
        return d;
      })
      .def(
          "order_at_cusp",
          [](const EtaQuotient& e, std::int64_t c, std::int64_t d) {
            const Rational r = ligozat_order(e, Cusp{c, d});
            return py::make_tuple(r.numerator(), r.denominator());
          },
          py::arg("c"), py::arg("d"))
      .def(
          "expand",
          [](const EtaQuotient& e, std::int64_t terms) {
            const F2Series f = expand(e, static_cast<std::size_t>(terms));
            return py::make_tuple(f.offset24(), f.support());
          },
          py::arg("terms"), "(offset in 24ths, relative indices of the odd coefficients)")
      .def("__repr__", [](const EtaQuotient& e) { return "EtaQuotient(" + e.to_string() + ")"; })
      .def("__str__", &EtaQuotient::to_string)
      .def("__eq__", [](const EtaQuotient& a, const EtaQuotient& b) { return a == b; });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line front end; returns (exit code, stdout, stderr).");
}
