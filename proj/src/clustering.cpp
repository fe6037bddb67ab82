#include "dpdpgov/clustering.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dpdpgov::clustering {

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

const std::vector<std::string>& default_stop_words() {
  static const std::vector<std::string> words = {
      "a",    "an",   "and",  "are",  "as",    "at",    "be",   "but",  "by",   "for",
      "from", "had",  "has",  "have", "he",    "her",   "his",  "if",   "in",   "into",
      "is",   "it",   "its",  "not",  "of",    "on",    "or",   "our",  "she",  "shall",
      "so",   "such", "that", "the",  "their", "there", "they", "this", "to",   "was",
      "were", "what", "when", "which", "while", "who",   "will", "with", "you",  "your",
  };
  return words;
}

std::vector<std::string> preprocess(const std::string& doc_text) {
  if (doc_text.empty()) throw std::runtime_error("empty document");
  static const std::set<std::string> stop(default_stop_words().begin(),
                                          default_stop_words().end());
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2 && !stop.count(cur)) tokens.push_back(cur);
    cur.clear();
  };
  for (char ch : doc_text) {
    if (std::isalnum(static_cast<unsigned char>(ch)))
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    else
      flush();
  }
  flush();
  if (tokens.empty()) throw std::runtime_error("empty document after preprocessing");
  return tokens;
}

// ---------------------------------------------------------------------------
// TF-IDF
// ---------------------------------------------------------------------------

Corpus vectorize(const std::vector<std::pair<std::string, std::string>>& docs) {
  if (docs.empty()) throw std::runtime_error("vectorize: empty corpus");

  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(docs.size());
  std::map<std::string, int> df;
  for (const auto& [id, text] : docs) {
    auto toks = preprocess(text);
    std::set<std::string> uniq(toks.begin(), toks.end());
    for (const auto& t : uniq) ++df[t];
    tokenized.push_back(std::move(toks));
  }

  Corpus corpus;
  std::unordered_map<std::string, int> index;
  for (const auto& [term, _] : df) {
    index[term] = static_cast<int>(corpus.vocabulary.size());
    corpus.vocabulary.push_back(term);
  }
  const double n = static_cast<double>(docs.size());
  corpus.idf.resize(corpus.vocabulary.size());
  for (std::size_t i = 0; i < corpus.vocabulary.size(); ++i)
    corpus.idf[i] = 1.0 + std::log(n / df.at(corpus.vocabulary[i]));

  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::map<int, int> counts;
    std::vector<int> ids;
    ids.reserve(tokenized[d].size());
    for (const auto& t : tokenized[d]) {
      int id = index.at(t);
      ++counts[id];
      ids.push_back(id);
    }
    CorpusVector v;
    v.doc_id = docs[d].first;
    const double len = static_cast<double>(tokenized[d].size());
    for (const auto& [id, c] : counts)
      v.tfidf[corpus.vocabulary[id]] = (c / len) * corpus.idf[id];
    corpus.vectors.push_back(std::move(v));
    corpus.token_ids.push_back(std::move(ids));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> dense_normalized(const Corpus& corpus) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < corpus.vocabulary.size(); ++i)
    index[corpus.vocabulary[i]] = static_cast<int>(i);
  std::vector<std::vector<double>> out;
  out.reserve(corpus.vectors.size());
  for (const auto& v : corpus.vectors) {
    std::vector<double> row(corpus.vocabulary.size(), 0.0);
    double norm2 = 0.0;
    for (const auto& [term, w] : v.tfidf) {
      row[index.at(term)] = w;
      norm2 += w * w;
    }
    double norm = std::sqrt(norm2);
    if (norm > 0)
      for (double& x : row) x /= norm;
    out.push_back(std::move(row));
  }
  return out;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

ClusterModel kmeans(const Corpus& corpus, int k, std::uint64_t seed) {
  const auto points = dense_normalized(corpus);
  const int n = static_cast<int>(points.size());
  if (k < 1 || n < k) throw std::runtime_error("kmeans: need |vectors| >= k >= 1");

  {
    std::set<std::vector<double>> distinct(points.begin(), points.end());
    if (static_cast<int>(distinct.size()) < k)
      throw std::runtime_error("kmeans: fewer than k distinct points (degenerate input)");
  }

  std::mt19937_64 rng(seed);

  // k-means++ seeding
  std::vector<std::vector<double>> centroids;
  {
    std::uniform_int_distribution<int> first(0, n - 1);
    centroids.push_back(points[first(rng)]);
    std::vector<double> d2(n);
    while (static_cast<int>(centroids.size()) < k) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::max();
        for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
        d2[i] = best;
        total += best;
      }
      int pick = 0;
      if (total > 0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double r = u(rng), acc = 0.0;
        for (int i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc >= r) {
            pick = i;
            break;
          }
        }
      } else {
        std::uniform_int_distribution<int> any(0, n - 1);
        pick = any(rng);
      }
      centroids.push_back(points[pick]);
    }
  }

  std::vector<int> assign(n, -1);
  ClusterModel model;
  model.k = k;
  model.vocabulary = corpus.vocabulary;
  model.idf = corpus.idf;

  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::max();
      for (int c = 0; c < k; ++c) {
        double d = sq_dist(points[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
      inertia += best_d;
    }
    if (!model.inertia_trace.empty()) {
      // Lloyd iterations never increase the objective
      assert(inertia <= model.inertia_trace.back() + 1e-9);
    }
    model.inertia_trace.push_back(inertia);
    if (!changed) break;

    // centroid update (mean of members); empty clusters grab the farthest point
    std::vector<std::vector<double>> next(k, std::vector<double>(points[0].size(), 0.0));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t j = 0; j < points[i].size(); ++j) next[assign[i]][j] += points[i][j];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = sq_dist(points[i], centroids[assign[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        next[c] = points[far];
        assign[far] = c;
      } else {
        for (double& x : next[c]) x /= counts[c];
      }
    }
    centroids = std::move(next);
  }

  model.centroids = std::move(centroids);
  for (int i = 0; i < n; ++i) model.assignments[corpus.vectors[i].doc_id] = assign[i];
  return model;
}

ClusterModel fit_kmeans(const Corpus& corpus, int k, std::uint64_t seed, int restarts) {
  if (restarts < 1) restarts = 1;
  std::optional<ClusterModel> best;
  for (int r = 0; r < restarts; ++r) {
    ClusterModel m = kmeans(corpus, k, seed + static_cast<std::uint64_t>(r) * 0x9e3779b9ULL);
    if (!best || m.inertia() < best->inertia()) best = std::move(m);
  }
  return std::move(*best);
}

// ---------------------------------------------------------------------------
// LDA (collapsed Gibbs)
// ---------------------------------------------------------------------------

LdaResult lda_refine(const std::vector<std::vector<int>>& docs_tokens, int vocab_size, int topics,
                     int iterations, std::uint64_t seed) {
  if (topics < 1) throw std::runtime_error("lda: topics must be >= 1");
  if (vocab_size < 1) throw std::runtime_error("lda: empty vocabulary");
  if (docs_tokens.empty()) throw std::runtime_error("lda: empty document set");

  const int d_count = static_cast<int>(docs_tokens.size());
  const double alpha = 50.0 / topics;
  const double beta = 0.01;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> topic_pick(0, topics - 1);

  std::vector<std::vector<int>> z(d_count);                         // topic per token
  std::vector<std::vector<int>> ndk(d_count, std::vector<int>(topics, 0));
  std::vector<std::vector<int>> nkw(topics, std::vector<int>(vocab_size, 0));
  std::vector<int> nk(topics, 0);

  for (int d = 0; d < d_count; ++d) {
    z[d].resize(docs_tokens[d].size());
    for (std::size_t i = 0; i < docs_tokens[d].size(); ++i) {
      int w = docs_tokens[d][i];
      if (w < 0 || w >= vocab_size) throw std::runtime_error("lda: token id out of range");
      int t = topic_pick(rng);
      z[d][i] = t;
      ++ndk[d][t];
      ++nkw[t][w];
      ++nk[t];
    }
  }

  std::vector<double> p(topics);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int iter = 0; iter < iterations; ++iter) {
    for (int d = 0; d < d_count; ++d) {
      for (std::size_t i = 0; i < docs_tokens[d].size(); ++i) {
        int w = docs_tokens[d][i];
        int t = z[d][i];
        --ndk[d][t];
        --nkw[t][w];
        --nk[t];

        double total = 0.0;
        for (int kk = 0; kk < topics; ++kk) {
          p[kk] = (ndk[d][kk] + alpha) * (nkw[kk][w] + beta) / (nk[kk] + beta * vocab_size);
          total += p[kk];
        }
        double r = unit(rng) * total;
        int pick = topics - 1;
        double acc = 0.0;
        for (int kk = 0; kk < topics; ++kk) {
          acc += p[kk];
          if (acc >= r) {
            pick = kk;
            break;
          }
        }
        z[d][i] = pick;
        ++ndk[d][pick];
        ++nkw[pick][w];
        ++nk[pick];
      }
    }
  }

  LdaResult res;
  res.topic_word.assign(topics, std::vector<double>(vocab_size, 0.0));
  for (int t = 0; t < topics; ++t) {
    double denom = nk[t] + beta * vocab_size;
    for (int w = 0; w < vocab_size; ++w) res.topic_word[t][w] = (nkw[t][w] + beta) / denom;
  }
  res.doc_topic.assign(d_count, std::vector<double>(topics, 0.0));
  for (int d = 0; d < d_count; ++d) {
    double denom = static_cast<double>(docs_tokens[d].size()) + alpha * topics;
    for (int t = 0; t < topics; ++t) res.doc_topic[d][t] = (ndk[d][t] + alpha) / denom;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Labeling and identification
// ---------------------------------------------------------------------------

void label_clusters(ClusterModel& model, const std::map<std::string, std::string>& doc_labels) {
  std::map<int, std::map<std::string, int>> votes;
  for (const auto& [doc, cluster] : model.assignments) {
    auto it = doc_labels.find(doc);
    if (it != doc_labels.end()) ++votes[cluster][it->second];
  }
  for (int c = 0; c < model.k; ++c) {
    std::string best;
    int best_n = -1;
    for (const auto& [label, n] : votes[c]) {
      if (n > best_n || (n == best_n && label < best)) {
        best = label;
        best_n = n;
      }
    }
    if (best_n >= 0) model.labels[c] = best;
  }
}

DomainMatch identify_domain(const std::string& doc_text, const ClusterModel& model) {
  if (model.labels.empty()) throw std::runtime_error("identify_domain: model is unlabeled");

  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
    index[model.vocabulary[i]] = static_cast<int>(i);

  std::vector<double> vec(model.vocabulary.size(), 0.0);
  bool any = false;
  auto tokens = preprocess(doc_text);
  std::map<int, int> counts;
  for (const auto& t : tokens) {
    auto it = index.find(t);
    if (it != index.end()) {
      ++counts[it->second];
      any = true;
    }
  }

  DomainMatch out;
  if (!any) {
    // no shared vocabulary: lowest-index label, confidence 0, flagged
    out.domain = model.labels.at(model.labels.begin()->first);
    out.confidence = 0.0;
    out.low_confidence = true;
    return out;
  }

  const double len = static_cast<double>(tokens.size());
  double norm2 = 0.0;
  for (const auto& [id, c] : counts) {
    vec[id] = (c / len) * model.idf[id];
    norm2 += vec[id] * vec[id];
  }
  double norm = std::sqrt(norm2);
  for (double& x : vec) x /= norm;

  int best = -1;
  double best_sim = -1.0;
  for (int c = 0; c < model.k; ++c) {
    double dot = 0.0, cn2 = 0.0;
    for (std::size_t j = 0; j < vec.size(); ++j) {
      dot += vec[j] * model.centroids[c][j];
      cn2 += model.centroids[c][j] * model.centroids[c][j];
    }
    double sim = cn2 > 0 ? dot / std::sqrt(cn2) : 0.0;
    if (sim > best_sim + 1e-15) {  // ties broken by lowest cluster index
      best_sim = sim;
      best = c;
    }
  }
  out.domain = model.labels.count(best) ? model.labels.at(best) : model.labels.begin()->second;
  out.confidence = std::clamp(best_sim, 0.0, 1.0);
  out.low_confidence = out.confidence == 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpus
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>>& domain_pools() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> pools = {
      {"E-commerce",
       {"cart", "checkout", "shipment", "catalog", "seller", "refund", "voucher", "wishlist",
        "marketplace", "inventory", "coupon", "storefront"}},
      {"Healthcare",
       {"patient", "diagnosis", "prescription", "clinic", "surgery", "vaccine", "symptom",
        "treatment", "pathology", "dosage", "ward", "radiology"}},
      {"Social Media",
       {"follower", "hashtag", "timeline", "repost", "influencer", "viral", "comment",
        "moderation", "feed", "upvote", "livestream", "emoji"}},
      {"Education",
       {"curriculum", "semester", "tuition", "classroom", "homework", "scholarship", "lecture",
        "enrollment", "syllabus", "grading", "campus", "faculty"}},
      {"Telecom",
       {"bandwidth", "roaming", "spectrum", "subscriber", "tower", "prepaid", "postpaid",
        "latency", "broadband", "tariff", "simcard", "coverage"}},
      {"Finance",
       {"loan", "interest", "mortgage", "deposit", "dividend", "portfolio", "credit",
        "collateral", "ledger", "overdraft", "remittance", "brokerage"}},
      {"Startups",
       {"funding", "accelerator", "pivot", "valuation", "incubator", "runway", "bootstrapped",
        "equity", "founder", "prototype", "traction", "seedround"}},
      {"Travel",
       {"itinerary", "boarding", "visa", "layover", "hostel", "excursion", "luggage",
        "destination", "airfare", "booking", "passportcheck", "sightseeing"}},
      {"Employment",
       {"payroll", "recruiter", "onboarding", "appraisal", "resume", "severance", "overtime",
        "vacancy", "probation", "gratuity", "attendance", "designation"}},
      {"Government",
       {"municipal", "census", "subsidy", "ordinance", "pension", "registry", "tribunal",
        "gazette", "welfare", "panchayat", "legislation", "bureaucracy"}},
  };
  return pools;
}

}  // namespace

std::vector<SyntheticDoc> synthesize_corpus(int docs_per_domain, std::uint64_t seed) {
  if (docs_per_domain < 1) throw std::runtime_error("docs_per_domain must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<SyntheticDoc> docs;
  for (const auto& [domain, pool] : domain_pools()) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> len(24, 40);
    for (int i = 0; i < docs_per_domain; ++i) {
      SyntheticDoc d;
      d.domain = domain;
      d.doc_id = domain + "_doc_" + std::to_string(i);
      int n = len(rng);
      for (int t = 0; t < n; ++t) {
        if (t) d.text += ' ';
        d.text += pool[pick(rng)];
      }
      docs.push_back(std::move(d));
    }
  }
  return docs;
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

std::string serialize_model(const ClusterModel& model) {
  std::ostringstream out;
  out << "k " << model.k << "\n";
  out << "vocab " << model.vocabulary.size() << "\n";
  for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
    out << "t " << model.vocabulary[i] << " " << fmt_double(model.idf[i]) << "\n";
  for (int c = 0; c < model.k; ++c) {
    out << "c " << c;
    if (model.labels.count(c)) out << " " << model.labels.at(c);
    out << "\n";
    out << "v";
    for (std::size_t j = 0; j < model.centroids[c].size(); ++j) {
      if (model.centroids[c][j] != 0.0) out << " " << j << ":" << fmt_double(model.centroids[c][j]);
    }
    out << "\n";
  }
  // cluster first: doc ids may contain spaces
  for (const auto& [doc, cluster] : model.assignments) out << "a " << cluster << " " << doc << "\n";
  return out.str();
}

ClusterModel parse_model(const std::string& content) {
  ClusterModel model;
  std::istringstream in(content);
  std::string line;
  int current_cluster = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "k") {
      ls >> model.k;
      model.centroids.resize(model.k);
    } else if (tag == "vocab") {
      std::size_t v;
      ls >> v;
      model.vocabulary.reserve(v);
      model.idf.reserve(v);
    } else if (tag == "t") {
      std::string term;
      double idf;
      ls >> term >> idf;
      model.vocabulary.push_back(term);
      model.idf.push_back(idf);
    } else if (tag == "c") {
      ls >> current_cluster;
      std::string label;
      std::getline(ls, label);
      label = label.empty() ? "" : label.substr(1);
      if (!label.empty()) model.labels[current_cluster] = label;
      model.centroids[current_cluster].assign(model.vocabulary.size(), 0.0);
    } else if (tag == "v") {
      std::string pair;
      while (ls >> pair) {
        std::size_t colon = pair.find(':');
        int idx = std::stoi(pair.substr(0, colon));
        model.centroids[current_cluster][idx] = std::stod(pair.substr(colon + 1));
      }
    } else if (tag == "a") {
      int cluster;
      ls >> cluster;
      std::string doc;
      std::getline(ls, doc);
      if (!doc.empty() && doc.front() == ' ') doc.erase(doc.begin());
      model.assignments[doc] = cluster;
    } else {
      throw std::runtime_error("unknown model record: " + line);
    }
  }
  if (model.k <= 0) throw std::runtime_error("model file missing 'k' record");
  return model;
}

void save_model_file(const ClusterModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << serialize_model(model);
}

ClusterModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace dpdpgov::clustering
