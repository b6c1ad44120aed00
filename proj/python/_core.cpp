// Copyright 2026 The Rolecast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rolecast/common.hpp"
#include "rolecast/corpus.hpp"
#include "rolecast/evalreport.hpp"
#include "rolecast/hybrid.hpp"
#include "rolecast/namefeat.hpp"
#include "rolecast/resources.hpp"
#include "rolecast/synthetic.hpp"

namespace py = pybind11;
using namespace rolecast;
using nlohmann::json;

namespace {

// A corpus plus, for generated data, its in-memory images.
struct PyCorpus {
  UserCorpus corpus;
  std::optional<std::map<std::string, Raster>> images;

  ImageLoader loader() const {
    return images ? map_image_loader(*images) : file_image_loader(corpus);
  }
  std::vector<PreparedUser> prepare(const Resources& res, unsigned threads) const {
    return prepare_users(corpus, res, loader(), threads);
  }
};

HybridConfig parse_config(const std::string& text) {
  json j = HybridConfig{}.to_json();
  if (!text.empty()) j.merge_patch(json::parse(text));
  HybridConfig c = HybridConfig::from_json(j);
  c.validate();
  return c;
}

py::dict prediction_dict(const RolePrediction& p) {
  py::dict d;
  d["user_id"] = p.user_id;
  d["role"] = std::string(role_name(p.role));
  d["probs"] = p.probs;
  py::dict channels;
  for (const auto& c : p.channels) channels[py::str(c.name)] = c.probs;
  d["channels"] = channels;
  d["image_flagged"] = p.image_flagged;
  d["brightness_imputed"] = p.brightness_imputed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Role classification of social media accounts.";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  py::class_<Resources>(m, "Resources")
      .def_static(
          "load",
          [](std::optional<std::string> dir) { return load_resources(resolve_resource_dir(dir)); },
          py::arg("directory") = py::none())
      .def("save", [](const Resources& r, const std::filesystem::path& dir) { save_resources(r, dir); })
      .def("fingerprints", &Resources::fingerprints)
      .def("name_score",
           [](const Resources& r, const std::string& term) { return name_score(term, r.names); })
      .def("display_name_score",
           [](const Resources& r, const std::string& s) { return display_name_score(s, r.names); })
      .def("screen_name_score",
           [](const Resources& r, const std::string& s) {
             return screen_name_score(s, r.names, r.lexicon);
           })
      .def("segment_screen_name",
           [](const Resources& r, const std::string& s) {
             const auto seg = segment_screen_name(s, r.names, r.lexicon);
             return py::make_tuple(std::string(segment_method_name(seg.method)), seg.tokens);
           })
      .def("dp_word_split", [](const Resources& r, const std::string& s) {
        const auto split = dp_word_split_with_cost(s, r.lexicon);
        return py::make_tuple(split.tokens, split.cost);
      });

  py::class_<PyCorpus>(m, "Corpus")
      .def_static(
          "load",
          [](const std::filesystem::path& path, bool require_labels, std::size_t min_tweets) {
            return PyCorpus{load_dataset(path, {require_labels, min_tweets}), std::nullopt};
          },
          py::arg("path"), py::arg("require_labels") = false, py::arg("min_tweets") = 1)
      .def("__len__", [](const PyCorpus& c) { return c.corpus.size(); })
      .def_property_readonly("user_ids",
                             [](const PyCorpus& c) {
                               std::vector<std::string> ids;
                               for (const auto& u : c.corpus.users()) ids.push_back(u.user_id);
                               return ids;
                             })
      .def_property_readonly("labels",
                             [](const PyCorpus& c) {
                               std::vector<std::optional<std::string>> out;
                               for (const auto& u : c.corpus.users())
                                 out.push_back(u.label ? std::optional<std::string>(
                                                             std::string(role_name(*u.label)))
                                                       : std::nullopt);
                               return out;
                             })
      .def_property_readonly("skipped", [](const PyCorpus& c) {
        std::vector<std::pair<std::size_t, std::string>> out;
        for (const auto& s : c.corpus.skipped()) out.emplace_back(s.line, s.reason);
        return out;
      });

  m.def(
      "generate_synthetic",
      [](std::size_t n_users, std::uint64_t seed, double separability, const std::string& mode) {
        SyntheticSpec spec;
        spec.separability = separability;
        spec.mode = parse_mode(mode);
        spec.validate();
        SyntheticData data = generate_synthetic_corpus(spec, n_users, seed);
        return py::make_tuple(PyCorpus{std::move(data.corpus), std::move(data.images)},
                              std::move(data.resources));
      },
      py::arg("n_users"), py::arg("seed") = 0, py::arg("separability") = 1.0,
      py::arg("mode") = "tri");

  m.def("default_config", [] { return HybridConfig{}.to_json().dump(); });

  py::class_<HybridModel>(m, "Model")
      .def_static(
          "train",
          [](const PyCorpus& c, const Resources& res, const std::string& config) {
            const HybridConfig cfg = parse_config(config);
            py::gil_scoped_release release;
            return train_hybrid(c.corpus, res, cfg, c.loader());
          },
          py::arg("corpus"), py::arg("resources"), py::arg("config") = "")
      .def_static("from_json",
                  [](const std::string& text) { return HybridModel::from_json(json::parse(text)); })
      .def("to_json", [](const HybridModel& model) { return model.to_json().dump(); })
      .def_property_readonly("config", [](const HybridModel& model) { return model.config().to_json().dump(); })
      .def_property_readonly("channel_names", &HybridModel::channel_names)
      .def("predict",
           [](const HybridModel& model, const PyCorpus& c, const Resources& res) {
             model.check_fingerprints(res);
             const auto users = c.prepare(res, std::max(1u, model.config().threads));
             py::list out;
             for (const auto& u : users) out.append(prediction_dict(model.predict(u, res)));
             return out;
           },
           py::arg("corpus"), py::arg("resources"));

  m.def(
      "cross_validate",
      [](const PyCorpus& c, const Resources& res, const std::string& config, std::size_t n_folds) {
        const HybridConfig cfg = parse_config(config);
        CVReport report;
        {
          py::gil_scoped_release release;
          const auto users = c.prepare(res, std::max(1u, cfg.threads));
          report = cross_validate(users, res, cfg, n_folds);
        }
        report.seconds.reset();
        return report_to_json(report).dump();
      },
      py::arg("corpus"), py::arg("resources"), py::arg("config") = "", py::arg("n_folds") = 10);

  m.def(
      "metrics",
      [](const std::vector<std::vector<std::uint64_t>>& rows) {
        ConfusionMatrix cm(rows.size());
        for (std::size_t t = 0; t < rows.size(); ++t) {
          if (rows[t].size() != rows.size()) throw std::invalid_argument("confusion matrix must be square");
          for (std::size_t p = 0; p < rows.size(); ++p) cm.add(t, p, rows[t][p]);
        }
        py::list roles;
        for (const auto& r : per_role_metrics(cm)) {
          py::dict d;
          d["recall"] = r.recall;
          d["precision"] = r.precision;
          d["f1"] = r.f1;
          roles.append(d);
        }
        return py::make_tuple(accuracy(cm), roles);
      },
      py::arg("confusion"));
}
