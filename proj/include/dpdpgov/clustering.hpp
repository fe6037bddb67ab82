#pragma once

// Domain clustering: TF-IDF vectorization, seeded k-means over
// cosine-normalized vectors, LDA topic refinement, and centroid-based
// domain identification for new documents.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dpdpgov::clustering {

// Lowercases, splits on non-alphanumerics, drops stop words and tokens
// shorter than 2 characters. Throws when nothing survives.
std::vector<std::string> preprocess(const std::string& doc_text);

const std::vector<std::string>& default_stop_words();

struct CorpusVector {
  std::string doc_id;
  std::map<std::string, double> tfidf;  // term -> weight, weights > 0
};

struct Corpus {
  std::vector<std::string> vocabulary;       // sorted terms
  std::vector<double> idf;                   // parallel to vocabulary
  std::vector<CorpusVector> vectors;
  std::vector<std::vector<int>> token_ids;   // per doc, vocabulary indices
};

// tf = count / doc length, idf = 1 + ln(N / df)
Corpus vectorize(const std::vector<std::pair<std::string, std::string>>& docs);

struct ClusterModel {
  int k = 0;
  std::vector<std::string> vocabulary;
  std::vector<double> idf;
  std::vector<std::vector<double>> centroids;       // k x |vocabulary|
  std::map<std::string, int> assignments;           // doc_id -> cluster
  std::map<int, std::string> labels;                // cluster -> domain name
  std::vector<std::vector<double>> topic_word;      // optional LDA output, T x V
  std::vector<double> inertia_trace;                // per-iteration inertia

  double inertia() const { return inertia_trace.empty() ? 0.0 : inertia_trace.back(); }
};

// k-means++ init with the given seed; cosine-normalized vectors with
// Euclidean updates; stops when assignments are stable or after 100
// iterations. Inertia is recorded per iteration and is non-increasing.
ClusterModel kmeans(const Corpus& corpus, int k, std::uint64_t seed);

// Runs `restarts` seeded k-means rounds and keeps the lowest-inertia model.
ClusterModel fit_kmeans(const Corpus& corpus, int k, std::uint64_t seed, int restarts = 5);

struct LdaResult {
  std::vector<std::vector<double>> topic_word;  // T x V, rows sum to 1
  std::vector<std::vector<double>> doc_topic;   // D x T, rows sum to 1
};

// Collapsed Gibbs sampling with symmetric priors alpha = 50/T, beta = 0.01.
LdaResult lda_refine(const std::vector<std::vector<int>>& docs_tokens, int vocab_size, int topics,
                     int iterations, std::uint64_t seed);

// Majority vote of curator labels over cluster members; ties go to the
// alphabetically first domain.
void label_clusters(ClusterModel& model, const std::map<std::string, std::string>& doc_labels);

struct DomainMatch {
  std::string domain;
  double confidence = 0.0;  // cosine similarity in [0,1]
  bool low_confidence = false;
};

DomainMatch identify_domain(const std::string& doc_text, const ClusterModel& model);

// ---------------------------------------------------------------------------
// Synthetic corpus (the evaluation corpus is unpublished; this generator
// produces seeded documents from disjoint per-domain keyword pools)
// ---------------------------------------------------------------------------

struct SyntheticDoc {
  std::string doc_id;
  std::string text;
  std::string domain;  // generator ground-truth label
};

std::vector<SyntheticDoc> synthesize_corpus(int docs_per_domain, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Persistence (text artifact, exact round-trip)
// ---------------------------------------------------------------------------

std::string serialize_model(const ClusterModel& model);
ClusterModel parse_model(const std::string& content);
void save_model_file(const ClusterModel& model, const std::string& path);
ClusterModel load_model_file(const std::string& path);

}  // namespace dpdpgov::clustering
