#include "trigit/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "trigit/lexer.hpp"
#include "trigit/model.hpp"

namespace trigit {

const char* posTagName(PosTag t) {
  switch (t) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Pron: return "PRON";
    case PosTag::Det: return "DET";
    case PosTag::Adp: return "ADP";
    case PosTag::Num: return "NUM";
    case PosTag::Conj: return "CONJ";
    case PosTag::Part: return "PART";
    case PosTag::Punct: return "PUNCT";
    case PosTag::X: return "X";
  }
  return "X";
}

std::optional<PosTag> posTagFromName(const std::string& name) {
  for (int i = 0; i < kPosTagCount; ++i) {
    PosTag t = static_cast<PosTag>(i);
    if (name == posTagName(t)) return t;
  }
  return std::nullopt;
}

std::vector<std::string> tokenizeSegment(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  auto isWord = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (isWord(c)) {
      std::size_t j = i;
      while (j < text.size() && isWord(text[j])) ++j;
      tokens.push_back(text.substr(i, j - i));
      i = j;
    } else {
      tokens.push_back(std::string(1, c));
      ++i;
    }
  }
  return tokens;
}

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

const std::unordered_map<std::string, PosTag>& closedClassLexicon() {
  static const std::unordered_map<std::string, PosTag> lex = [] {
    std::unordered_map<std::string, PosTag> m;
    auto addAll = [&](PosTag tag, std::initializer_list<const char*> words) {
      for (const char* w : words) m.emplace(w, tag);
    };
    addAll(PosTag::Det, {"the", "a", "an", "this", "that", "these", "those", "each",
                         "every", "either", "neither", "some", "any", "no", "all",
                         "both", "such", "another"});
    addAll(PosTag::Pron, {"i", "you", "he", "she", "it", "we", "they", "me", "him",
                          "her", "us", "them", "my", "your", "its", "our", "their",
                          "mine", "yours", "ours", "theirs", "myself", "itself",
                          "themselves", "who", "whom", "whose", "which", "what",
                          "something", "anything", "nothing", "everything",
                          "someone", "anyone", "everyone"});
    addAll(PosTag::Adp, {"in", "on", "at", "by", "for", "with", "from", "of", "into",
                         "onto", "over", "under", "above", "below", "between",
                         "through", "during", "against", "about", "within",
                         "without", "upon", "off", "near", "across", "behind",
                         "beyond", "around", "along", "after", "before"});
    addAll(PosTag::Conj, {"and", "or", "but", "nor", "so", "yet", "because",
                          "although", "though", "while", "whereas", "unless",
                          "until", "since", "if", "when", "whenever", "wherever"});
    addAll(PosTag::Part, {"to", "not"});
    addAll(PosTag::Adv, {"once", "then", "very", "really", "also", "already",
                         "still", "again", "soon", "later", "never", "always",
                         "often", "sometimes", "too", "quite", "there", "here",
                         "now", "ever", "just", "only", "maybe"});
    addAll(PosTag::Num, {"one", "two", "three", "four", "five", "six", "seven",
                         "eight", "nine", "ten", "zero"});
    addAll(PosTag::Verb,
           {"be", "is", "are", "was", "were", "been", "being", "am", "do", "does",
            "did", "done", "have", "has", "had", "having", "will", "would", "shall",
            "should", "can", "could", "may", "might", "must", "need", "needs",
            "remove", "use", "make", "add", "check", "delete", "fix", "change",
            "update", "drop", "drops", "merge", "support", "implement", "replace",
            "move", "rename", "investigate", "consider", "try", "enable", "disable",
            "clean", "refactor", "switch", "swap", "become", "becomes", "work",
            "works", "get", "set", "keep", "mark", "see"});
    return m;
  }();
  return lex;
}

bool endsWith(const std::string& s, const char* suffix) {
  std::string_view sv = suffix;
  return s.size() > sv.size() && s.compare(s.size() - sv.size(), sv.size(), sv) == 0;
}

bool isNumericToken(const std::string& t) {
  bool digit = false, dot = false;
  for (char c : t) {
    if (c >= '0' && c <= '9') digit = true;
    else if (c == '.' && !dot) dot = true;
    else return false;
  }
  return digit;
}

bool isPunctToken(const std::string& t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) {
    return !std::isalnum(c) && c != '_';
  });
}

bool isCodeLikeToken(const std::string& t) {
  if (t.find('_') != std::string::npos) return true;
  int upper = 0, lower = 0, digits = 0;
  bool transition = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(t[i]);
    if (std::isupper(c)) ++upper;
    else if (std::islower(c)) ++lower;
    else if (std::isdigit(c)) ++digits;
    if (i > 0 && std::islower(static_cast<unsigned char>(t[i - 1])) && std::isupper(c))
      transition = true;
  }
  if (transition) return true;                       // CamelCase / camelCase
  if (upper >= 2 && lower == 0) return true;         // UPPER_CASE / acronyms
  if (digits > 0 && (upper + lower) > 0) return true;  // jdk8, utf8
  return false;
}

PosTag tagOne(const std::string& token) {
  auto& lex = closedClassLexicon();
  auto hit = lex.find(lowercase(token));
  if (hit != lex.end()) return hit->second;
  std::string low = lowercase(token);
  if (endsWith(low, "ing") || endsWith(low, "ed") || endsWith(low, "ize")) return PosTag::Verb;
  if (endsWith(low, "ly")) return PosTag::Adv;
  if (endsWith(low, "ous") || endsWith(low, "able")) return PosTag::Adj;
  if (isNumericToken(token)) return PosTag::Num;
  if (isPunctToken(token)) return PosTag::Punct;
  if (isCodeLikeToken(token)) return PosTag::X;
  return PosTag::Noun;
}

const std::unordered_set<std::string>& stopwordSet() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
      "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing",
      "down", "during", "each", "few", "for", "from", "further", "had", "has",
      "have", "having", "he", "her", "here", "hers", "herself", "him", "himself",
      "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
      "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off",
      "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
      "over", "own", "same", "she", "should", "so", "some", "such", "than", "that",
      "the", "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until", "up",
      "very", "was", "we", "were", "what", "when", "where", "which", "while",
      "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
      "yourself", "yourselves",
  };
  return words;
}

}  // namespace

std::vector<PosTag> tagPos(const std::vector<std::string>& tokens) {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const std::string& t : tokens) tags.push_back(tagOne(t));
  return tags;
}

PosTagger taggerFromOverrides(const std::string& jsonLines,
                              std::vector<std::string>* warnings) {
  auto table = std::make_shared<std::unordered_map<std::string, std::vector<PosTag>>>();
  std::istringstream in(jsonLines);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("tokens") || !j.contains("tags") ||
        j["tokens"].size() != j["tags"].size()) {
      if (warnings)
        warnings->push_back("pos override line " + std::to_string(lineNo) + " ignored");
      continue;
    }
    std::string key;
    for (const auto& t : j["tokens"]) key += t.get<std::string>() + "\x1f";
    std::vector<PosTag> tags;
    for (const auto& t : j["tags"]) {
      auto tag = posTagFromName(t.get<std::string>());
      if (!tag && warnings)
        warnings->push_back("unknown POS tag '" + t.get<std::string>() + "' mapped to X");
      tags.push_back(tag.value_or(PosTag::X));
    }
    (*table)[key] = std::move(tags);
  }
  return [table](const std::vector<std::string>& tokens) {
    std::string key;
    for (const std::string& t : tokens) key += t + "\x1f";
    auto hit = table->find(key);
    if (hit != table->end()) return hit->second;
    return tagPos(tokens);
  };
}

SpecialTokenClass specialTokenClass(const std::string& token) {
  if (stopwordSet().count(lowercase(token))) return SpecialTokenClass::Stopword;
  if (isPunctToken(token)) return SpecialTokenClass::Punctuation;
  if (isNumericToken(token)) return SpecialTokenClass::Number;
  if (isJavaKeyword(token)) return SpecialTokenClass::JavaKeyword;
  if (isCodeLikeToken(token)) return SpecialTokenClass::JavaIdentifier;
  return SpecialTokenClass::Other;
}

EmbeddingTable parseEmbeddings(const std::string& content) {
  EmbeddingTable table;
  std::istringstream in(content);
  std::string line;
  int lineNo = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string f;
    while (ls >> f) fields.push_back(f);
    if (first) {
      first = false;
      if (fields.size() == 2) {
        // optional "count dim" header
        char* end1 = nullptr;
        char* end2 = nullptr;
        long count = std::strtol(fields[0].c_str(), &end1, 10);
        long dim = std::strtol(fields[1].c_str(), &end2, 10);
        if (*end1 == '\0' && *end2 == '\0' && count >= 0 && dim > 0) {
          table.dim = static_cast<int>(dim);
          continue;
        }
      }
    }
    if (fields.size() < 2) throw FormatError(lineNo, "expected a word and its vector");
    int dim = static_cast<int>(fields.size()) - 1;
    if (table.dim == 0) table.dim = dim;
    if (dim != table.dim)
      throw FormatError(lineNo, "ragged row: expected " + std::to_string(table.dim) +
                                    " values, found " + std::to_string(dim));
    Eigen::VectorXd vec(dim);
    for (int i = 0; i < dim; ++i) {
      try {
        vec[i] = std::stod(fields[i + 1]);
      } catch (const std::exception&) {
        throw FormatError(lineNo, "bad float '" + fields[i + 1] + "'");
      }
    }
    std::string word = lowercase(fields[0]);
    if (table.vectors.count(word))
      table.warnings.push_back("duplicate word '" + word + "', keeping the last one");
    table.vectors[word] = std::move(vec);
  }
  return table;
}

EmbeddingTable loadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot read embeddings file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseEmbeddings(ss.str());
}

FeatureSchema makeSchema(FeatureConfig config, int embeddingDim) {
  FeatureSchema schema;
  schema.config = config;
  schema.embeddingDim = config == FeatureConfig::Full ? embeddingDim : 0;
  static const char* specialNames[kSpecialClassCount] = {
      "stopword", "punctuation", "number", "javaKeyword", "javaIdentifier"};
  for (const char* segment : {"trigger", "action"}) {
    schema.names.push_back(std::string(segment) + ".tokenCount");
    for (int t = 0; t < kPosTagCount; ++t)
      schema.names.push_back(std::string(segment) + ".pos." +
                             posTagName(static_cast<PosTag>(t)));
    for (const char* s : specialNames)
      schema.names.push_back(std::string(segment) + ".special." + s);
  }
  if (config == FeatureConfig::Full) {
    for (const char* segment : {"trigger", "action"})
      for (int d = 0; d < embeddingDim; ++d)
        schema.names.push_back(std::string(segment) + ".emb." + std::to_string(d));
  }
  return schema;
}

namespace {

constexpr int kBaseGroupDims = 1 + kPosTagCount + kSpecialClassCount;  // 18

void fillSegmentBase(Eigen::VectorXd& out, int offset, const std::vector<std::string>& tokens,
                     const PosTagger& tagger) {
  const double n = static_cast<double>(tokens.size());
  out[offset] = n;
  if (tokens.empty()) return;
  std::vector<PosTag> tags = tagger ? tagger(tokens) : tagPos(tokens);
  for (PosTag t : tags) out[offset + 1 + static_cast<int>(t)] += 1.0 / n;
  for (const std::string& tok : tokens) {
    SpecialTokenClass cls = specialTokenClass(tok);
    if (cls == SpecialTokenClass::Other) continue;
    out[offset + 1 + kPosTagCount + static_cast<int>(cls)] += 1.0 / n;
  }
}

void fillSegmentEmbedding(Eigen::VectorXd& out, int offset,
                          const std::vector<std::string>& tokens,
                          const EmbeddingTable& table) {
  if (tokens.empty()) return;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim);
  for (const std::string& tok : tokens) {
    auto hit = table.vectors.find(lowercase(tok));
    if (hit != table.vectors.end()) sum += hit->second;
    // out-of-vocabulary tokens contribute zero vectors
  }
  out.segment(offset, table.dim) = sum / static_cast<double>(tokens.size());
}

}  // namespace

Eigen::VectorXd featurize(const std::string& triggerText, const std::string& actionText,
                          FeatureConfig config, const EmbeddingTable* embeddings,
                          const PosTagger& tagger) {
  if (config == FeatureConfig::Full && (!embeddings || embeddings->dim == 0))
    throw MissingEmbeddings();
  const int embDim = config == FeatureConfig::Full ? embeddings->dim : 0;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * kBaseGroupDims + 2 * embDim);

  std::vector<std::string> trigger = tokenizeSegment(triggerText);
  std::vector<std::string> action = tokenizeSegment(actionText);
  fillSegmentBase(out, 0, trigger, tagger);
  fillSegmentBase(out, kBaseGroupDims, action, tagger);
  if (config == FeatureConfig::Full) {
    fillSegmentEmbedding(out, 2 * kBaseGroupDims, trigger, *embeddings);
    fillSegmentEmbedding(out, 2 * kBaseGroupDims + embDim, action, *embeddings);
  }
  return out;
}

namespace {

double stableLogistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double stableLog1pExp(double z) {
  // log(1 + e^z) without overflow
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

LossGrad logisticLossAndGradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& weights, double bias, double l2) {
  const double n = static_cast<double>(X.rows());
  Eigen::VectorXd z = (X * weights).array() + bias;
  double nll = 0.0;
  Eigen::VectorXd p(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    nll += stableLog1pExp(z[i]) - y[i] * z[i];
    p[i] = stableLogistic(z[i]);
  }
  LossGrad out;
  out.loss = nll / n + 0.5 * l2 * weights.squaredNorm();
  out.gradWeights = X.transpose() * (p - y) / n + l2 * weights;
  out.gradBias = (p - y).mean();
  return out;
}

ClassifierModel trainLogReg(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Hyperparams& hp, std::vector<double>* lossTrace) {
  const double positives = y.sum();
  if (positives == 0.0 || positives == static_cast<double>(y.size()))
    throw DegenerateDataset();

  ClassifierModel model;
  model.hyperparams = hp;
  model.mean = X.colwise().mean();
  Eigen::VectorXd var =
      ((X.rowwise() - model.mean.transpose()).array().square().colwise().sum() /
       static_cast<double>(X.rows()))
          .transpose();
  model.scale = var.array().sqrt();
  for (Eigen::Index i = 0; i < model.scale.size(); ++i)
    if (model.scale[i] == 0.0) model.scale[i] = 1.0;  // constant dim: stays zero

  Eigen::MatrixXd Xs = (X.rowwise() - model.mean.transpose()).array().rowwise() /
                       model.scale.transpose().array();
  model.weights = Eigen::VectorXd::Zero(X.cols());
  model.bias = 0.0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    LossGrad lg = logisticLossAndGradient(Xs, y, model.weights, model.bias, hp.l2);
    if (lossTrace) lossTrace->push_back(lg.loss);
    model.weights -= hp.learningRate * lg.gradWeights;
    model.bias -= hp.learningRate * lg.gradBias;
  }
  if (lossTrace)
    lossTrace->push_back(
        logisticLossAndGradient(Xs, y, model.weights, model.bias, hp.l2).loss);
  return model;
}

double predictProbability(const ClassifierModel& model, const Eigen::VectorXd& rawFeatures) {
  Eigen::VectorXd xs =
      (rawFeatures - model.mean).array() / model.scale.array();
  return stableLogistic(model.weights.dot(xs) + model.bias);
}

Metrics metricsFromCounts(long tp, long fp, long fn, long tn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  long total = tp + fp + fn + tn;
  m.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 0.0;
  m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

LoocvResult looCrossValidate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const Hyperparams& hp) {
  const Eigen::Index n = X.rows();
  if (n < 3) throw DegenerateDataset();
  LoocvResult result;
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (Eigen::Index hold = 0; hold < n; ++hold) {
    Eigen::MatrixXd Xt(n - 1, X.cols());
    Eigen::VectorXd yt(n - 1);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == hold) continue;
      Xt.row(row) = X.row(i);
      yt[row] = y[i];
      ++row;
    }
    double p;
    double trainPositives = yt.sum();
    if (trainPositives == 0.0 || trainPositives == static_cast<double>(yt.size())) {
      p = trainPositives / static_cast<double>(yt.size());  // training prior
    } else {
      ClassifierModel model = trainLogReg(Xt, yt, hp);
      p = predictProbability(model, X.row(hold).transpose());
    }
    bool predicted = p >= hp.threshold;
    bool actual = y[hold] >= 0.5;
    if (predicted && actual) ++tp;
    else if (predicted && !actual) ++fp;
    else if (!predicted && actual) ++fn;
    else ++tn;
    ++result.folds;
  }
  result.metrics = metricsFromCounts(tp, fp, fn, tn);
  result.yesCount = static_cast<long>(y.sum());
  result.noCount = static_cast<long>(y.size()) - result.yesCount;
  return result;
}

std::vector<LabeledComment> parseDataset(const std::string& jsonLines) {
  std::vector<LabeledComment> out;
  std::istringstream in(jsonLines);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError(lineNo, "invalid JSON");
    if (!j.contains("trigger") || !j.contains("action") || !j.contains("label"))
      throw FormatError(lineNo, "expected trigger, action and label fields");
    std::string label = j["label"].get<std::string>();
    if (label != "yes" && label != "no")
      throw FormatError(lineNo, "label must be \"yes\" or \"no\"");
    LabeledComment c;
    c.trigger = j["trigger"].get<std::string>();
    c.action = j["action"].get<std::string>();
    c.label = label == "yes";
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<LabeledComment> loadDataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot read dataset file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseDataset(ss.str());
}

Eigen::MatrixXd featurizeDataset(const std::vector<LabeledComment>& data,
                                 FeatureConfig config, const EmbeddingTable* embeddings,
                                 const PosTagger& tagger) {
  const int embDim =
      config == FeatureConfig::Full && embeddings ? embeddings->dim : 0;
  const int dim = 2 * kBaseGroupDims + 2 * embDim;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(data.size()), dim);
  for (std::size_t i = 0; i < data.size(); ++i)
    X.row(static_cast<Eigen::Index>(i)) =
        featurize(data[i].trigger, data[i].action, config, embeddings, tagger).transpose();
  return X;
}

Eigen::VectorXd labelVector(const std::vector<LabeledComment>& data) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i)
    y[static_cast<Eigen::Index>(i)] = data[i].label ? 1.0 : 0.0;
  return y;
}

}  // namespace trigit
