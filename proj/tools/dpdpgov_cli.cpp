// dpdpgov command line: ingest datasets, build the compliance repository and
// cluster model, evaluate requests end-to-end, run the domain-score harness,
// verify audit traces, and optionally serve a JSON endpoint.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dpdpgov/engine.hpp"

namespace fs = std::filesystem;
using namespace dpdpgov;

namespace {

struct CliConfig {
  std::string repository_path;
  std::string policy_path;
  std::string cluster_model_path;
  std::string trust_model_path;
  std::string freemail_path;
  std::string purpose_keywords_path;
  std::string key = "dpdpgov-default-key";
  std::uint64_t seed = 7;
  std::vector<std::pair<std::string, std::string>> datasets;  // (csv, sidecar-or-empty)
};

CliConfig load_config(const std::string& explicit_path) {
  CliConfig cfg;
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv("DPDPGOV_CONFIG")) path = env;
  }
  if (path.empty()) return cfg;

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    return p.empty() || fs::path(p).is_absolute() ? p : (base / p).string();
  };
  if (j.contains("repository")) cfg.repository_path = resolve(j["repository"]);
  if (j.contains("policy")) cfg.policy_path = resolve(j["policy"]);
  if (j.contains("cluster_model")) cfg.cluster_model_path = resolve(j["cluster_model"]);
  if (j.contains("trust_model")) cfg.trust_model_path = resolve(j["trust_model"]);
  if (j.contains("freemail")) cfg.freemail_path = resolve(j["freemail"]);
  if (j.contains("purpose_keywords")) cfg.purpose_keywords_path = resolve(j["purpose_keywords"]);
  if (j.contains("key")) cfg.key = j["key"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("datasets")) {
    for (const auto& d : j["datasets"]) {
      std::string csv = resolve(d.at("csv").get<std::string>());
      std::string sidecar = d.contains("sidecar") ? resolve(d["sidecar"].get<std::string>()) : "";
      cfg.datasets.emplace_back(csv, sidecar);
    }
  }
  return cfg;
}

void ingest_into(engine::Engine& eng, const std::string& csv, const std::string& sidecar) {
  std::optional<store::MetadataSidecar> sc;
  if (!sidecar.empty()) {
    sc = store::MetadataSidecar::load(sidecar);
  } else {
    std::string implicit = csv + ".meta.json";
    if (fs::exists(implicit)) sc = store::MetadataSidecar::load(implicit);
  }
  eng.data_store().ingest_csv(csv, sc);
}

engine::Engine build_engine(const CliConfig& cfg) {
  engine::Engine eng;
  if (!cfg.repository_path.empty())
    eng.set_repository(compliance::load_repository_file(cfg.repository_path));
  if (!cfg.policy_path.empty()) eng.set_policy(policy::load_policy_file(cfg.policy_path));
  if (!cfg.cluster_model_path.empty())
    eng.set_cluster_model(clustering::load_model_file(cfg.cluster_model_path));
  if (!cfg.trust_model_path.empty())
    eng.set_trust_model(trust::load_model_file(cfg.trust_model_path));
  if (!cfg.freemail_path.empty() || !cfg.purpose_keywords_path.empty())
    eng.set_interpreter_config(
        trust::InterpreterConfig::load(cfg.freemail_path, cfg.purpose_keywords_path));
  eng.set_key(cfg.key);
  for (const auto& [csv, sidecar] : cfg.datasets) ingest_into(eng, csv, sidecar);
  return eng;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

int run_evaluate(engine::Engine& eng, const std::string& request_path,
                 const std::string& out_dir) {
  AccessRequest req = engine::load_request_file(request_path);
  engine::EvaluationOutcome outcome;
  try {
    outcome = eng.evaluate(req);
  } catch (const engine::StageError& e) {
    std::cerr << "evaluation failed at stage " << e.stage() << ": " << e.what() << "\n";
    return 2;
  }

  std::string request_id = fs::path(request_path).stem().string();
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  fs::path base = dir / (req.source_file + "." + request_id);

  write_file(base.string() + ".anonymized.csv", anonymizer::slice_to_csv(outcome.result.slice));
  write_file(base.string() + ".report", outcome.report);
  audit::save_audit_file(outcome.result.audit, base.string() + ".audit");

  std::cout << "trust: " << to_string(outcome.data_profile.trust) << "\n"
            << "sensitivity: " << to_string(outcome.finding.level)
            << (outcome.finding.defaulted ? " (defaulted)" : "") << "\n"
            << "strategy: " << outcome.strategy.name << "\n";
  char score[32];
  std::snprintf(score, sizeof(score), "%.4f", outcome.result.score);
  std::cout << "anonymisation score: " << score << "\n"
            << "outputs: " << base.string() << ".{anonymized.csv,report,audit}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpdpgov - privacy-aware data governance engine"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file (or set DPDPGOV_CONFIG); holds repository/policy/model "
                 "paths, key, seed, and datasets to ingest");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Ingest CSV datasets and print their metadata");
  std::vector<std::string> ingest_paths;
  std::string ingest_sidecar;
  ingest->add_option("csv", ingest_paths, "CSV files")->required();
  ingest->add_option("--sidecar", ingest_sidecar, "metadata sidecar (single dataset only)");

  // build-repo
  auto* build_repo =
      app.add_subcommand("build-repo", "Run the compliance pipeline over regulation text");
  std::vector<std::string> repo_inputs;
  std::string repo_out;
  build_repo->add_option("text", repo_inputs, "regulation plain-text files")->required();
  build_repo->add_option("-o,--out", repo_out, "write extracted tuples to this repository file");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Build the domain cluster model");
  std::string corpus_dir, cluster_out;
  bool synthetic = false;
  int docs_per_domain = 6, k = 10, lda_topics = 0, lda_iterations = 200;
  std::uint64_t cluster_seed = 7;
  cluster->add_option("--corpus", corpus_dir,
                      "corpus directory (one subdirectory per domain, .txt files)");
  cluster->add_flag("--synthetic", synthetic, "use the seeded synthetic corpus");
  cluster->add_option("--docs-per-domain", docs_per_domain, "synthetic docs per domain");
  cluster->add_option("--k", k, "number of clusters");
  cluster->add_option("--seed", cluster_seed, "random seed");
  cluster->add_option("--topics", lda_topics, "LDA topics per model (0 disables refinement)");
  cluster->add_option("--lda-iterations", lda_iterations, "LDA Gibbs iterations");
  cluster->add_option("-o,--out", cluster_out, "model output path")->required();

  // train-trust
  auto* train = app.add_subcommand("train-trust", "Train the KYU random-forest trust model");
  std::string trust_out;
  int train_n = 600, train_trees = 25, train_folds = 5;
  double train_noise = 0.02;
  std::uint64_t train_seed = 7;
  train->add_option("-o,--out", trust_out, "model output path")->required();
  train->add_option("--n", train_n, "synthesized rows");
  train->add_option("--noise", train_noise, "label noise rate");
  train->add_option("--trees", train_trees, "tree count");
  train->add_option("--folds", train_folds, "cross-validation folds");
  train->add_option("--seed", train_seed, "random seed");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate an access request end-to-end");
  std::string request_path, out_dir;
  evaluate->add_option("request", request_path, "request file (text block or JSON)")->required();
  evaluate->add_option("--out-dir", out_dir, "output directory (default: cwd)");

  // domain-scores
  auto* domain_scores =
      app.add_subcommand("domain-scores", "Mean Anonymisation Score per domain over a batch");
  std::vector<std::string> batch_paths;
  domain_scores->add_option("requests", batch_paths, "request files")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Replay an audit log and verify traceability");
  std::string verify_csv, verify_anon, verify_audit;
  verify->add_option("--original", verify_csv, "original dataset CSV")->required();
  verify->add_option("--anonymized", verify_anon, "anonymized output CSV")->required();
  verify->add_option("--audit", verify_audit, "audit log (NDJSON)")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "JSON request endpoint (disabled unless invoked)");
  int port = 8080;
  serve->add_option("--port", port, "listen port");

  CLI11_PARSE(app, argc, argv);

  try {
    CliConfig cfg = load_config(config_path);

    if (*ingest) {
      engine::Engine eng = build_engine(cfg);
      if (!ingest_sidecar.empty() && ingest_paths.size() != 1)
        throw std::runtime_error("--sidecar applies to a single dataset");
      for (const auto& p : ingest_paths) {
        ingest_into(eng, p, ingest_sidecar);
        const auto& meta = eng.data_store().metadata(fs::path(p).filename().string());
        std::cout << meta.dataset_id << ": domain=" << meta.domain << ", owner=" << meta.owner
                  << ", name=" << meta.name << "\n";
        for (const auto& c : meta.columns)
          std::cout << "  " << c.name << " (" << store::to_string(c.kind) << ", "
                    << to_string(c.attr_class) << ")\n";
      }
      return 0;
    }

    if (*build_repo) {
      auto gaz = compliance::Gazetteers::defaults();
      compliance::TupleConstruction all;
      for (const auto& p : repo_inputs) {
        auto built = compliance::run_pipeline(read_file(p), gaz);
        all.tuples.insert(all.tuples.end(), built.tuples.begin(), built.tuples.end());
        all.curation_queue.insert(all.curation_queue.end(), built.curation_queue.begin(),
                                  built.curation_queue.end());
      }
      std::cout << "extracted " << all.tuples.size() << " tuple(s), "
                << all.curation_queue.size() << " curation queue entr(ies)\n";
      for (const auto& c : all.curation_queue)
        std::cout << "  curation: [" << c.section_heading << "] " << c.reason << "\n";
      if (!repo_out.empty()) {
        compliance::save_repository_file(all.tuples, repo_out);
        std::cout << "wrote " << repo_out << "\n";
      }
      return 0;
    }

    if (*cluster) {
      std::vector<std::pair<std::string, std::string>> docs;
      std::map<std::string, std::string> labels;
      if (synthetic == corpus_dir.empty() && !synthetic)
        throw std::runtime_error("give either --corpus or --synthetic");
      if (synthetic) {
        for (const auto& d : clustering::synthesize_corpus(docs_per_domain, cluster_seed)) {
          docs.emplace_back(d.doc_id, d.text);
          labels[d.doc_id] = d.domain;
        }
      } else {
        for (const auto& domain_dir : fs::directory_iterator(corpus_dir)) {
          if (!domain_dir.is_directory()) continue;
          std::string label = domain_dir.path().filename().string();
          for (const auto& f : fs::directory_iterator(domain_dir.path())) {
            if (f.path().extension() != ".txt") continue;
            std::string id = label + "/" + f.path().filename().string();
            docs.emplace_back(id, read_file(f.path().string()));
            labels[id] = label;
          }
        }
      }
      auto corpus = clustering::vectorize(docs);
      auto model = clustering::fit_kmeans(corpus, k, cluster_seed);
      clustering::label_clusters(model, labels);
      if (lda_topics > 0) {
        auto lda = clustering::lda_refine(corpus.token_ids,
                                          static_cast<int>(corpus.vocabulary.size()), lda_topics,
                                          lda_iterations, cluster_seed);
        model.topic_word = lda.topic_word;
      }
      clustering::save_model_file(model, cluster_out);
      std::cout << "clustered " << docs.size() << " docs into " << k
                << " clusters (final inertia " << model.inertia() << ")\n";
      for (const auto& [c, label] : model.labels)
        std::cout << "  cluster " << c << " -> " << label << "\n";
      std::cout << "wrote " << cluster_out << "\n";
      return 0;
    }

    if (*train) {
      auto rows = trust::synthesize_training_data(train_n, train_noise, train_seed);
      auto trained = trust::train_trust_model(rows, train_trees, train_folds, train_seed);
      trust::save_model_file(trained.model, trust_out);
      std::cout << "trained " << train_trees << " trees on " << train_n << " rows; " << train_folds
                << "-fold CV accuracy " << trained.cv_accuracy << "\n"
                << "wrote " << trust_out << "\n";
      return 0;
    }

    if (*evaluate) {
      engine::Engine eng = build_engine(cfg);
      return run_evaluate(eng, request_path, out_dir);
    }

    if (*domain_scores) {
      engine::Engine eng = build_engine(cfg);
      std::vector<engine::EvaluationOutcome> batch;
      for (const auto& p : batch_paths)
        batch.push_back(eng.evaluate(engine::load_request_file(p)));
      std::cout << "Domain                          Mean score  Requests\n";
      for (const auto& row : engine::Engine::domain_scores(batch)) {
        char line[96];
        std::snprintf(line, sizeof(line), "%-30s  %.4f      %d", row.domain.c_str(),
                      row.mean_score, row.count);
        std::cout << line << "\n";
      }
      return 0;
    }

    if (*verify) {
      store::DataStore ds;
      std::optional<store::MetadataSidecar> sc;
      if (fs::exists(verify_csv + ".meta.json"))
        sc = store::MetadataSidecar::load(verify_csv + ".meta.json");
      const auto& meta = ds.ingest_csv(verify_csv, sc);

      auto entries = audit::load_audit_file(verify_audit);
      auto anon_rows = store::parse_csv(read_file(verify_anon));
      if (anon_rows.empty()) throw std::runtime_error("anonymized CSV is empty");

      anonymizer::TransformResult result;
      result.slice.columns = anon_rows.front();
      for (std::size_t r = 1; r < anon_rows.size(); ++r) {
        std::vector<store::Cell> row;
        for (const auto& f : anon_rows[r]) {
          store::Cell c;
          c.text = f;
          c.null = f.empty();
          row.push_back(std::move(c));
        }
        result.slice.rows.push_back(std::move(row));
      }
      result.audit = entries;
      double sum = 0.0;
      for (const auto& e : entries) sum += e.distance;
      result.score = entries.empty() ? 0.0 : sum / entries.size();

      AccessRequest req;
      req.email = "verify@local";
      req.purpose = "verify";
      req.requested_attributes = result.slice.columns;
      req.source_file = meta.dataset_id;
      auto original = ds.fetch(ds.build_query(req, meta));

      auto verdict = audit::verify_trace(original, result);
      if (verdict.pass) {
        std::cout << "PASS: " << verdict.message << "\n";
        return 0;
      }
      std::cout << "FAIL: " << verdict.message;
      if (verdict.row) std::cout << " at row " << *verdict.row;
      if (verdict.column) std::cout << ", column " << *verdict.column;
      std::cout << "\n";
      return 1;
    }

    if (*serve) {
      engine::Engine eng = build_engine(cfg);
      // local include to keep the server optional at the call site
      extern int run_server(engine::Engine & eng, int port);
      return run_server(eng, port);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
