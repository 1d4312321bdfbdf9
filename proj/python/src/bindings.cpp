// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Python bindings for the coefficient tables, closed-form outage and the
// Monte Carlo estimator. Exact rationals cross the boundary as strings.

#include "fdrelay/cli.hpp"
#include "fdrelay/monte_carlo.hpp"
#include "fdrelay/outage.hpp"
#include "fdrelay/wishart.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;
using namespace fdrelay;

namespace {

outage::AntennaConfig make_config(int n_s, int n_r1, int n_r2, int n_d, const std::string& mode) {
    outage::AntennaConfig c{n_s, n_r1, n_r2, n_d, outage::parse_zf_mode(mode)};
    c.validate();
    return c;
}

outage::LinkBudget make_budget(double gammabar_db, double alpha_sr, double alpha_rd) {
    auto b = outage::LinkBudget::symmetric(cli::db_to_linear(gammabar_db));
    b.alpha_sr = alpha_sr;
    b.alpha_rd = alpha_rd;
    b.validate();
    return b;
}

// One store per process so repeated calls reuse tables.
wishart::CoeffStore& store() {
    static wishart::CoeffStore s;
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Outage analysis of a full-duplex MIMO relay with zero-forcing loopback suppression";

    py::register_exception<outage::ProbabilityRangeError>(m, "ProbabilityRangeError", PyExc_ArithmeticError);
    py::register_exception<wishart::CacheError>(m, "CacheError", PyExc_RuntimeError);

    py::class_<wishart::CoeffTable, std::shared_ptr<wishart::CoeffTable>>(m, "CoeffTable")
        .def_property_readonly("dims",
                               [](const wishart::CoeffTable& t) { return std::make_tuple(t.dims().a(), t.dims().b()); })
        .def_property_readonly("k_ab", [](const wishart::CoeffTable& t) { return algebra::to_string(t.k_ab()); })
        .def_property_readonly("entries",
                               [](const wishart::CoeffTable& t) {
                                   std::vector<std::tuple<int, int, std::string>> out;
                                   for (const auto& e : t.entries()) out.emplace_back(e.n, e.m, algebra::to_string(e.d));
                                   return out;
                               },
                               "(n, m, D) triples with D as an exact rational string")
        .def("coefficient", [](const wishart::CoeffTable& t, int n, int mm) { return algebra::to_string(t.coefficient(n, mm)); })
        .def("sum", [](const wishart::CoeffTable& t) { return algebra::to_string(t.sum()); })
        .def("cdf", [](const wishart::CoeffTable& t, double x, double scale) { return outage::link_outage(t, scale, x); },
             py::arg("x"), py::arg("scale") = 1.0)
        .def("pdf", [](const wishart::CoeffTable& t, double x, double scale) { return outage::pdf_gamma_link(t, scale, x); },
             py::arg("x"), py::arg("scale") = 1.0);

    m.def("coefficients",
          [](int a, int b) { return store().get(wishart::WishartDims::from_shape(a, b)); },
          py::arg("rows"), py::arg("cols"),
          "Exact largest-eigenvalue coefficient table of a rows x cols complex Wishart law");

    m.def("link_dims",
          [](int n_s, int n_r1, int n_r2, int n_d, const std::string& mode) {
              const auto c = make_config(n_s, n_r1, n_r2, n_d, mode);
              std::vector<std::tuple<int, int>> out;
              for (auto link : {outage::Link::SourceRelay, outage::Link::RelayDestination}) {
                  const auto d = outage::link_dims(c, link);
                  out.emplace_back(d.a(), d.b());
              }
              return out;
          },
          py::arg("n_s"), py::arg("n_r1"), py::arg("n_r2"), py::arg("n_d"), py::arg("mode") = "receive");

    m.def("diversity_order",
          [](int n_s, int n_r1, int n_r2, int n_d, const std::string& mode) {
              return outage::diversity_order(make_config(n_s, n_r1, n_r2, n_d, mode));
          },
          py::arg("n_s"), py::arg("n_r1"), py::arg("n_r2"), py::arg("n_d"), py::arg("mode") = "receive");

    m.def("outage",
          [](int n_s, int n_r1, int n_r2, int n_d, const std::string& mode, double gammabar_db, double gamma_t,
             double alpha_sr, double alpha_rd) {
              return outage::outage_e2e_closed_form(make_config(n_s, n_r1, n_r2, n_d, mode),
                                                    make_budget(gammabar_db, alpha_sr, alpha_rd),
                                                    outage::SnrThreshold{gamma_t}, store());
          },
          py::arg("n_s"), py::arg("n_r1"), py::arg("n_r2"), py::arg("n_d"), py::arg("mode"), py::arg("gammabar_db"),
          py::arg("gamma_t"), py::arg("alpha_sr") = 1.0, py::arg("alpha_rd") = 1.0,
          "Closed-form end-to-end outage probability; gamma_t is a linear SNR threshold");

    m.def("simulate_outage",
          [](int n_s, int n_r1, int n_r2, int n_d, const std::string& mode, double gammabar_db, double gamma_t,
             std::size_t trials, std::uint64_t seed, double alpha_sr, double alpha_rd, unsigned threads) {
              const auto c = make_config(n_s, n_r1, n_r2, n_d, mode);
              const auto b = make_budget(gammabar_db, alpha_sr, alpha_rd);
              sim::OutageEstimate e;
              {
                  py::gil_scoped_release release;
                  e = sim::estimate_outage(c, b, outage::SnrThreshold{gamma_t}, trials, seed, threads);
              }
              py::dict d;
              d["p_hat"] = e.p_hat;
              d["ci_low"] = e.ci_low;
              d["ci_high"] = e.ci_high;
              d["outages"] = e.outages;
              d["trials"] = e.trials;
              return d;
          },
          py::arg("n_s"), py::arg("n_r1"), py::arg("n_r2"), py::arg("n_d"), py::arg("mode"), py::arg("gammabar_db"),
          py::arg("gamma_t"), py::arg("trials"), py::arg("seed") = 1, py::arg("alpha_sr") = 1.0,
          py::arg("alpha_rd") = 1.0, py::arg("threads") = 0,
          "Monte Carlo outage estimate with a 95% Wilson interval");

    m.def("rate_to_snr_threshold", &outage::rate_to_snr_threshold, py::arg("r0"));
    m.def("db_to_linear", &cli::db_to_linear, py::arg("db"));
}
