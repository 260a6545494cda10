#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace trigit {

// Coarse 12-tag set of the heuristic tagger.
enum class PosTag { Noun, Verb, Adj, Adv, Pron, Det, Adp, Num, Conj, Part, Punct, X };
inline constexpr int kPosTagCount = 12;

const char* posTagName(PosTag t);
std::optional<PosTag> posTagFromName(const std::string& name);

// Whitespace/punctuation tokenization: word characters clump, every other
// printable character stands alone.
std::vector<std::string> tokenizeSegment(const std::string& text);

// Deterministic heuristic tagging: closed-class lexicon, then suffix rules
// (-ing/-ed/-ize verb, -ly adverb, -ous/-able adjective), numeric pattern,
// punctuation, CamelCase/UPPER_CASE/code-like, default noun.
std::vector<PosTag> tagPos(const std::vector<std::string>& tokens);

using PosTagger = std::function<std::vector<PosTag>(const std::vector<std::string>&)>;

// Tagger backed by a JSON Lines override file ({"tokens":[...],"tags":[...]});
// sequences not covered fall back to the heuristic. Unknown tag names map to X.
PosTagger taggerFromOverrides(const std::string& jsonLines,
                              std::vector<std::string>* warnings = nullptr);

enum class SpecialTokenClass { Stopword, Punctuation, Number, JavaKeyword,
                               JavaIdentifier, Other };
inline constexpr int kSpecialClassCount = 5;  // Other is not a feature dim

// First matching class in the order above; the stopword and Java keyword
// lists are frozen, compiled-in resources.
SpecialTokenClass specialTokenClass(const std::string& token);

struct FormatError : std::runtime_error {
  int line;
  FormatError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

struct EmbeddingTable {
  std::unordered_map<std::string, Eigen::VectorXd> vectors;  // lowercase words
  int dim = 0;
  std::vector<std::string> warnings;  // duplicate words, header notes
};

// word2vec-style text: optional "count dim" header, then one word and dim
// floats per line. Ragged rows raise FormatError; duplicate words keep the
// last occurrence with a warning.
EmbeddingTable parseEmbeddings(const std::string& content);
EmbeddingTable loadEmbeddings(const std::filesystem::path& path);

enum class FeatureConfig { Baseline, Full };

struct FeatureSchema {
  FeatureConfig config = FeatureConfig::Baseline;
  int embeddingDim = 0;  // 0 in baseline
  std::vector<std::string> names;
  int dim() const { return static_cast<int>(names.size()); }
};

// Baseline: per segment, token count + 12 POS frequencies + 5 special-token
// frequencies (trigger group then action group). Full appends the two
// segment-embedding groups as trailing dims.
FeatureSchema makeSchema(FeatureConfig config, int embeddingDim);

struct MissingEmbeddings : std::runtime_error {
  MissingEmbeddings() : std::runtime_error("full configuration requires embeddings") {}
};

Eigen::VectorXd featurize(const std::string& triggerText, const std::string& actionText,
                          FeatureConfig config, const EmbeddingTable* embeddings = nullptr,
                          const PosTagger& tagger = nullptr);

struct Hyperparams {
  double learningRate = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
  double threshold = 0.5;
};

struct ClassifierModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // stddev, with zero-variance dims pinned to 1
  Hyperparams hyperparams;
};

struct DegenerateDataset : std::runtime_error {
  DegenerateDataset() : std::runtime_error("dataset must contain both labels") {}
};

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd gradWeights;
  double gradBias = 0.0;
};

// Mean L2-regularized negative log-likelihood of labels y in {0,1} under
// logits X*w + b, with 0.5*l2*|w|^2 (bias unpenalized), plus its gradient.
LossGrad logisticLossAndGradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& weights, double bias, double l2);

// Full-batch gradient descent from zero weights on standardized features;
// deterministic. Throws DegenerateDataset when one class is absent.
// `lossTrace`, when given, records the loss before each step and after the
// last one.
ClassifierModel trainLogReg(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Hyperparams& hp, std::vector<double>* lossTrace = nullptr);

double predictProbability(const ClassifierModel& model, const Eigen::VectorXd& rawFeatures);

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

Metrics metricsFromCounts(long tp, long fp, long fn, long tn);

struct LoocvResult {
  Metrics metrics;
  int folds = 0;
  long yesCount = 0;
  long noCount = 0;
};

// Leave-one-out cross validation: N train/predict rounds, standardization
// refit per fold; degenerate folds predict the training prior.
LoocvResult looCrossValidate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Hyperparams& hp);

struct LabeledComment {
  std::string trigger;
  std::string action;
  bool label = false;  // "yes" == true
};

// JSON Lines {"trigger","action","label":"yes"|"no"}; FormatError on bad rows.
std::vector<LabeledComment> parseDataset(const std::string& jsonLines);
std::vector<LabeledComment> loadDataset(const std::filesystem::path& path);

// Featurizes a dataset under one schema; rows follow the input order.
Eigen::MatrixXd featurizeDataset(const std::vector<LabeledComment>& data,
                                 FeatureConfig config,
                                 const EmbeddingTable* embeddings = nullptr,
                                 const PosTagger& tagger = nullptr);
Eigen::VectorXd labelVector(const std::vector<LabeledComment>& data);

}  // namespace trigit
