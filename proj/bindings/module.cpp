#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpdpgov/engine.hpp"

namespace py = pybind11;
using namespace dpdpgov;

namespace {

py::dict outcome_to_dict(const engine::EvaluationOutcome& o) {
  py::dict d;
  d["trust"] = to_string(o.data_profile.trust);
  d["sensitivity"] = to_string(o.finding.level);
  d["defaulted"] = o.finding.defaulted;
  d["strategy"] = o.strategy.name;
  d["score"] = o.result.score;
  d["report"] = o.report;
  py::list columns;
  for (const auto& c : o.result.slice.columns) columns.append(c);
  d["columns"] = columns;
  py::list rows;
  for (const auto& row : o.result.slice.rows) {
    py::list r;
    for (const auto& cell : row) r.append(cell.null ? py::object(py::none()) : py::str(cell.text));
    rows.append(r);
  }
  d["rows"] = rows;
  d["audit_entries"] = static_cast<int>(o.result.audit.size());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Privacy-aware data governance engine";

  py::class_<engine::Engine>(m, "Engine")
      .def(py::init<>())
      .def("load_repository",
           [](engine::Engine& e, const std::string& path) {
             e.set_repository(compliance::load_repository_file(path));
           },
           py::arg("path"))
      .def("load_policy",
           [](engine::Engine& e, const std::string& path) {
             e.set_policy(policy::load_policy_file(path));
           },
           py::arg("path"))
      .def("set_key", &engine::Engine::set_key, py::arg("key"))
      .def("ingest",
           [](engine::Engine& e, const std::string& csv_path,
              const std::optional<std::string>& sidecar_path) {
             std::optional<store::MetadataSidecar> sc;
             if (sidecar_path) sc = store::MetadataSidecar::load(*sidecar_path);
             const auto& meta = e.data_store().ingest_csv(csv_path, sc);
             py::dict d;
             d["dataset_id"] = meta.dataset_id;
             d["domain"] = meta.domain;
             d["owner"] = meta.owner;
             d["name"] = meta.name;
             return d;
           },
           py::arg("csv_path"), py::arg("sidecar_path") = py::none())
      .def("evaluate",
           [](const engine::Engine& e, const std::string& email, const std::string& purpose,
              const std::vector<std::string>& attributes, const std::string& source_file) {
             AccessRequest req{email, purpose, attributes, source_file};
             return outcome_to_dict(e.evaluate(req));
           },
           py::arg("email"), py::arg("purpose"), py::arg("attributes"), py::arg("source_file"))
      .def("evaluate_request_file", [](const engine::Engine& e, const std::string& path) {
        return outcome_to_dict(e.evaluate(engine::load_request_file(path)));
      });

  m.def("mask_value", &anonymizer::mask_value, py::arg("value"), py::arg("p"));
  m.def("generalize_numeric", &anonymizer::generalize_numeric, py::arg("value"),
        py::arg("bin_count"), py::arg("min"), py::arg("max"));
  m.def("pseudonymize", &anonymizer::pseudonymize, py::arg("value"), py::arg("key"));
  m.def("encrypt_value", &anonymizer::encrypt_value, py::arg("value"), py::arg("key"));
  m.def("decrypt_value", &anonymizer::decrypt_value, py::arg("token"), py::arg("key"));

  m.def("trust_level",
        [](const std::string& email, const std::string& purpose) {
          AccessRequest req{email, purpose, {"x"}, "d.csv"};
          store::DatasetMetadata meta;
          meta.dataset_id = "d.csv";
          meta.columns.push_back(
              {"x", store::ColumnKind::Text, AttributeClass::QuasiIdentifier});
          auto profile = trust::interpret_request(req, meta);
          return to_string(trust::oracle_trust(trust::features_of(profile)));
        },
        py::arg("email"), py::arg("purpose"),
        "KYU trust level for an email/purpose pair using the built-in interpreter");

  m.def("canonical_domain", &canonical_domain_display, py::arg("raw"));
  m.def("canonical_principal", &canonical_principal, py::arg("raw"));
}
