#include "dpdpgov/trust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dpdpgov/text_util.hpp"

namespace dpdpgov::trust {

using text::to_lower;
using text::trim;

// ---------------------------------------------------------------------------
// Request interpretation
// ---------------------------------------------------------------------------

InterpreterConfig InterpreterConfig::load(const std::string& freemail_path,
                                          const std::string& purpose_path) {
  InterpreterConfig cfg;
  if (!freemail_path.empty()) {
    std::ifstream in(freemail_path);
    if (!in) throw std::runtime_error("cannot open freemail gazetteer: " + freemail_path);
    cfg.freemail_domains.clear();
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (!t.empty() && t[0] != '#') cfg.freemail_domains.push_back(to_lower(t));
    }
  }
  if (!purpose_path.empty()) {
    std::ifstream in(purpose_path);
    if (!in) throw std::runtime_error("cannot open purpose keyword map: " + purpose_path);
    cfg.purpose_keywords.clear();
    std::string line;
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      auto parts = text::split(t, '=');
      if (parts.size() != 2)
        throw std::runtime_error("bad purpose keyword line (want keyword=class): " + line);
      std::string cls = to_lower(trim(parts[1]));
      PurposeClass pc;
      if (cls == "organizationaluse") pc = PurposeClass::OrganizationalUse;
      else if (cls == "selfuse") pc = PurposeClass::SelfUse;
      else if (cls == "externaluse") pc = PurposeClass::ExternalUse;
      else throw std::runtime_error("unknown purpose class: " + parts[1]);
      cfg.purpose_keywords.emplace_back(to_lower(trim(parts[0])), pc);
    }
  }
  return cfg;
}

RequestProfile interpret_request(const AccessRequest& request,
                                 const store::DatasetMetadata& metadata,
                                 const InterpreterConfig& config) {
  std::string err = request.validate();
  if (!err.empty()) throw std::runtime_error("invalid request: " + err);

  RequestProfile profile;
  profile.email = request.email;
  profile.access_purpose = request.purpose;

  std::string domain_part = to_lower(request.email.substr(request.email.find('@') + 1));
  profile.email_class = EmailClass::Organizational;
  for (const auto& fm : config.freemail_domains) {
    if (domain_part == fm || (domain_part.size() > fm.size() &&
                              domain_part.compare(domain_part.size() - fm.size() - 1,
                                                  fm.size() + 1, "." + fm) == 0)) {
      profile.email_class = EmailClass::Personal;
      break;
    }
  }

  std::string purpose_low = to_lower(request.purpose);
  profile.intent = PurposeClass::ExternalUse;  // conservative default
  profile.intent_low_confidence = true;
  for (const auto& [kw, pc] : config.purpose_keywords) {
    if (purpose_low.find(kw) != std::string::npos) {
      profile.intent = pc;
      profile.intent_low_confidence = false;
      break;
    }
  }

  for (const auto& attr : request.requested_attributes) {
    const store::ColumnMeta* col = metadata.find_column(attr);
    if (!col) throw std::runtime_error("requested attribute not in dataset: " + attr);
    profile.data_type.emplace_back(attr, store::to_string(col->kind));
  }
  return profile;
}

TrustFeatures features_of(const RequestProfile& profile) {
  return TrustFeatures{profile.email_class, profile.intent};
}

TrustLevel oracle_trust(const TrustFeatures& f) {
  int code = (static_cast<int>(f.email_class) + static_cast<int>(f.purpose_class)) / 2;
  return static_cast<TrustLevel>(code);
}

// ---------------------------------------------------------------------------
// Training data
// ---------------------------------------------------------------------------

std::vector<LabeledRow> synthesize_training_data(int n, double noise_rate, std::uint64_t seed) {
  if (n < 100) throw std::invalid_argument("synthesize_training_data: n must be >= 100");
  if (noise_rate < 0.0 || noise_rate >= 1.0)
    throw std::invalid_argument("noise_rate must be in [0,1)");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> email_pick(0, 1);
  std::uniform_int_distribution<int> purpose_pick(0, 2);
  std::uniform_real_distribution<double> noise(0.0, 1.0);

  std::vector<LabeledRow> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    LabeledRow r;
    double email_code = email_pick(rng) == 0 ? 0.0 : 2.0;
    double purpose_code = static_cast<double>(purpose_pick(rng));
    r.features = {email_code, purpose_code, noise(rng), noise(rng)};
    TrustFeatures f{static_cast<EmailClass>(static_cast<int>(email_code)),
                    static_cast<PurposeClass>(static_cast<int>(purpose_code))};
    r.label = static_cast<int>(oracle_trust(f));
    rows.push_back(std::move(r));
  }

  if (noise_rate > 0.0) {
    int perturb = static_cast<int>(std::lround(noise_rate * n));
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_int_distribution<int> dir(0, 1);
    for (int i = 0; i < perturb; ++i) {
      int& label = rows[idx[i]].label;
      int delta = dir(rng) == 0 ? -1 : 1;
      label = std::clamp(label + delta, 0, 2);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Decision tree / forest
// ---------------------------------------------------------------------------

namespace {

constexpr int kClassCount = 3;

double gini(const std::array<int, kClassCount>& counts, int total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (int c : counts) {
    double p = static_cast<double>(c) / total;
    g -= p * p;
  }
  return g;
}

int majority(const std::array<int, kClassCount>& counts) {
  int best = 0;
  for (int c = 1; c < kClassCount; ++c)
    if (counts[c] > counts[best]) best = c;
  return best;
}

struct TreeBuilder {
  const std::vector<LabeledRow>& rows;
  std::mt19937_64& rng;
  int feature_count;
  int subsample;  // features considered per split
  std::vector<TreeNode> nodes;

  int build(std::vector<int> indices, int depth) {
    std::array<int, kClassCount> counts{};
    for (int i : indices) ++counts[rows[i].label];
    int total = static_cast<int>(indices.size());

    TreeNode node;
    node.label = majority(counts);
    double node_gini = gini(counts, total);
    if (node_gini == 0.0 || total < 2 || depth >= 24) {
      nodes.push_back(node);
      return static_cast<int>(nodes.size()) - 1;
    }

    // feature subsampling without replacement
    std::vector<int> feats(feature_count);
    std::iota(feats.begin(), feats.end(), 0);
    std::shuffle(feats.begin(), feats.end(), rng);
    feats.resize(subsample);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = node_gini;
    for (int f : feats) {
      std::vector<double> values;
      values.reserve(indices.size());
      for (int i : indices) values.push_back(rows[i].features[f]);
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t v = 0; v + 1 < values.size(); ++v) {
        double thr = (values[v] + values[v + 1]) / 2.0;
        std::array<int, kClassCount> left{}, right{};
        int nl = 0, nr = 0;
        for (int i : indices) {
          if (rows[i].features[f] <= thr) {
            ++left[rows[i].label];
            ++nl;
          } else {
            ++right[rows[i].label];
            ++nr;
          }
        }
        double impurity = (nl * gini(left, nl) + nr * gini(right, nr)) / total;
        if (impurity + 1e-12 < best_impurity) {
          best_impurity = impurity;
          best_feature = f;
          best_threshold = thr;
        }
      }
    }

    if (best_feature < 0) {
      nodes.push_back(node);
      return static_cast<int>(nodes.size()) - 1;
    }

    std::vector<int> left_idx, right_idx;
    for (int i : indices) {
      if (rows[i].features[best_feature] <= best_threshold)
        left_idx.push_back(i);
      else
        right_idx.push_back(i);
    }

    node.feature = best_feature;
    node.threshold = best_threshold;
    nodes.push_back(node);
    int self = static_cast<int>(nodes.size()) - 1;
    int left = build(std::move(left_idx), depth + 1);
    int right = build(std::move(right_idx), depth + 1);
    nodes[self].left = left;
    nodes[self].right = right;
    return self;
  }
};

DecisionTree grow_tree(const std::vector<LabeledRow>& rows, const std::vector<int>& sample,
                       std::mt19937_64& rng) {
  std::vector<LabeledRow> boot;
  boot.reserve(sample.size());
  for (int i : sample) boot.push_back(rows[i]);

  int f_count = static_cast<int>(rows.front().features.size());
  int subsample = std::max(1, static_cast<int>(std::lround(std::sqrt(f_count))));
  TreeBuilder b{boot, rng, f_count, subsample, {}};
  std::vector<int> all(boot.size());
  std::iota(all.begin(), all.end(), 0);
  b.build(std::move(all), 0);
  DecisionTree t;
  t.nodes = std::move(b.nodes);
  return t;
}

TrustModel train_forest(const std::vector<LabeledRow>& rows, int tree_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(rows.size()) - 1);
  TrustModel model;
  model.seed = seed;
  for (int t = 0; t < tree_count; ++t) {
    std::vector<int> sample(rows.size());
    for (auto& s : sample) s = pick(rng);
    model.trees.push_back(grow_tree(rows, sample, rng));
  }
  return model;
}

}  // namespace

int DecisionTree::predict(const std::vector<double>& x) const {
  int i = 0;
  while (nodes[i].feature >= 0)
    i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  return nodes[i].label;
}

int TrustModel::predict(const std::vector<double>& x) const {
  std::array<int, kClassCount> votes{};
  for (const auto& t : trees) ++votes[t.predict(x)];
  return majority(votes);
}

TrainResult train_trust_model(const std::vector<LabeledRow>& rows, int tree_count, int folds,
                              std::uint64_t seed) {
  if (tree_count < 1) throw std::invalid_argument("tree_count must be >= 1");
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  if (static_cast<int>(rows.size()) < 10 * folds)
    throw std::invalid_argument("need at least 10 rows per fold");
  {
    std::set<int> classes;
    for (const auto& r : rows) classes.insert(r.label);
    if (classes.size() < 2)
      throw std::runtime_error("training error: fewer than 2 classes present");
  }

  std::mt19937_64 rng(seed);
  std::vector<int> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);

  TrainResult result;
  double acc_sum = 0.0;
  for (int f = 0; f < folds; ++f) {
    std::vector<LabeledRow> train_rows, test_rows;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (static_cast<int>(i % folds) == f)
        test_rows.push_back(rows[idx[i]]);
      else
        train_rows.push_back(rows[idx[i]]);
    }
    TrustModel fold_model = train_forest(train_rows, tree_count, seed + 1000 + f);
    int correct = 0;
    for (const auto& r : test_rows)
      if (fold_model.predict(r.features) == r.label) ++correct;
    double acc = static_cast<double>(correct) / test_rows.size();
    result.model.fold_accuracies.push_back(acc);
    acc_sum += acc;
  }
  result.cv_accuracy = acc_sum / folds;

  TrustModel final_model = train_forest(rows, tree_count, seed);
  final_model.fold_accuracies = result.model.fold_accuracies;
  final_model.cv_accuracy = result.cv_accuracy;
  result.model = std::move(final_model);
  return result;
}

TrustLevel score_trust(const TrustModel& model, const TrustFeatures& features) {
  if (model.trees.empty()) throw std::runtime_error("score_trust: model has no trees");
  // noise features at mid-range; clean grid points must match the oracle
  std::vector<double> x = {static_cast<double>(static_cast<int>(features.email_class)),
                           static_cast<double>(static_cast<int>(features.purpose_class)), 0.5, 0.5};
  return static_cast<TrustLevel>(model.predict(x));
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string serialize_model(const TrustModel& model) {
  std::ostringstream out;
  out << "trees " << model.trees.size() << "\n";
  out << "seed " << model.seed << "\n";
  out << "cv " << fmt_double(model.cv_accuracy);
  for (double a : model.fold_accuracies) out << " " << fmt_double(a);
  out << "\n";
  for (const auto& t : model.trees) {
    out << "tree " << t.nodes.size() << "\n";
    for (const auto& n : t.nodes)
      out << "n " << n.feature << " " << fmt_double(n.threshold) << " " << n.left << " " << n.right
          << " " << n.label << "\n";
  }
  return out.str();
}

TrustModel parse_model(const std::string& content) {
  TrustModel model;
  std::istringstream in(content);
  std::string tag;
  std::size_t tree_count = 0;
  if (!(in >> tag >> tree_count) || tag != "trees")
    throw std::runtime_error("trust model: expected 'trees' header");
  if (!(in >> tag >> model.seed) || tag != "seed")
    throw std::runtime_error("trust model: expected 'seed'");
  std::string cv_line;
  std::getline(in, cv_line);  // consume end of seed line
  std::getline(in, cv_line);
  {
    std::istringstream cv(cv_line);
    if (!(cv >> tag >> model.cv_accuracy) || tag != "cv")
      throw std::runtime_error("trust model: expected 'cv'");
    double a;
    while (cv >> a) model.fold_accuracies.push_back(a);
  }
  for (std::size_t t = 0; t < tree_count; ++t) {
    std::size_t node_count;
    if (!(in >> tag >> node_count) || tag != "tree")
      throw std::runtime_error("trust model: expected 'tree'");
    DecisionTree tree;
    for (std::size_t i = 0; i < node_count; ++i) {
      TreeNode n;
      if (!(in >> tag >> n.feature >> n.threshold >> n.left >> n.right >> n.label) || tag != "n")
        throw std::runtime_error("trust model: bad node record");
      tree.nodes.push_back(n);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

void save_model_file(const TrustModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trust model: " + path);
  out << serialize_model(model);
}

TrustModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trust model: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace dpdpgov::trust
