#include <json.hpp>

#include "chd/error.hpp"
#include "chd/models.hpp"

namespace chd {
namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, Eigen::Index cols) {
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(Errc::DimensionMismatch, "matrix row width");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json tree_to_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value, n.samples}));
  return nodes;
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  for (const auto& n : j) {
    DecisionTree::Node node;
    node.feature = n.at(0).get<int>();
    node.threshold = n.at(1).get<double>();
    node.left = n.at(2).get<int>();
    node.right = n.at(3).get<int>();
    node.value = n.at(4).get<double>();
    node.samples = n.at(5).get<std::size_t>();
    t.nodes.push_back(node);
  }
  const auto count = static_cast<int>(t.nodes.size());
  for (const auto& node : t.nodes) {
    if (node.feature >= 0 && (node.left <= 0 || node.right <= 0 || node.left >= count || node.right >= count))
      throw Error(Errc::InvalidArgument, "tree node points outside the node table");
  }
  if (t.nodes.empty()) throw Error(Errc::InvalidArgument, "empty tree");
  return t;
}

}  // namespace

std::string TrainedModel::to_json() const {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["algorithm"] = chd::to_string(spec_.algorithm());
  doc["seed"] = spec_.seed();
  doc["dimension"] = dimension_;
  doc["hyperparameters"] = json(spec_.hyperparameters());
  doc["converged"] = converged();
  json p;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogisticModel>) {
          p["weights"] = vector_to_json(m.weights);
          p["bias"] = m.bias;
          p["iterations"] = m.iterations;
        } else if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          p["log_prior"] = m.log_prior;
          p["means"] = matrix_to_json(m.means);
          p["variances"] = matrix_to_json(m.variances);
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          p["k"] = m.k;
          p["points"] = matrix_to_json(m.points);
          p["labels"] = m.labels;
        } else if constexpr (std::is_same_v<T, DecisionTree>) {
          p["nodes"] = tree_to_json(m);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
          p["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          p["gamma"] = m.gamma;
          p["bias"] = m.bias;
          p["iterations"] = m.iterations;
          p["coefficients"] = vector_to_json(m.coefficients);
          p["support_vectors"] = matrix_to_json(m.support_vectors);
        }
      },
      parameters_);
  doc["parameters"] = std::move(p);
  return doc.dump();
}

TrainedModel TrainedModel::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format_version").get<int>() != kFormatVersion)
      throw Error(Errc::InvalidArgument, "unsupported model format version");
    const Algorithm algorithm = algorithm_from_string(doc.at("algorithm").get<std::string>());
    const auto seed = doc.at("seed").get<std::uint64_t>();
    const auto dimension = doc.at("dimension").get<std::size_t>();
    Hyperparameters hp = doc.at("hyperparameters").get<Hyperparameters>();
    ClassifierSpec spec(algorithm, hp, seed);
    const auto d = static_cast<Eigen::Index>(dimension);
    const bool converged = doc.at("converged").get<bool>();
    const json& p = doc.at("parameters");
    switch (algorithm) {
      case Algorithm::LR: {
        LogisticModel m;
        m.weights = vector_from_json(p.at("weights"));
        m.bias = p.at("bias").get<double>();
        m.iterations = p.at("iterations").get<std::size_t>();
        m.converged = converged;
        if (m.weights.size() != d) throw Error(Errc::DimensionMismatch, "weights");
        return TrainedModel(spec, std::move(m), dimension);
      }
      case Algorithm::NB: {
        NaiveBayesModel m;
        m.log_prior = p.at("log_prior").get<std::array<double, 2>>();
        m.means = matrix_from_json(p.at("means"), d);
        m.variances = matrix_from_json(p.at("variances"), d);
        return TrainedModel(spec, std::move(m), dimension);
      }
      case Algorithm::KNN: {
        KnnModel m;
        m.k = p.at("k").get<std::size_t>();
        m.points = matrix_from_json(p.at("points"), d);
        m.labels = p.at("labels").get<std::vector<int>>();
        return TrainedModel(spec, std::move(m), dimension);
      }
      case Algorithm::CART:
        return TrainedModel(spec, tree_from_json(p.at("nodes")), dimension);
      case Algorithm::RF: {
        ForestModel m;
        for (const auto& t : p.at("trees")) m.trees.push_back(tree_from_json(t));
        return TrainedModel(spec, std::move(m), dimension);
      }
      case Algorithm::SVM: {
        SvmModel m;
        m.gamma = p.at("gamma").get<double>();
        m.bias = p.at("bias").get<double>();
        m.iterations = p.at("iterations").get<std::size_t>();
        m.converged = converged;
        m.coefficients = vector_from_json(p.at("coefficients"));
        m.support_vectors = matrix_from_json(p.at("support_vectors"), d);
        return TrainedModel(spec, std::move(m), dimension);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed model JSON: ") + e.what());
  }
  throw Error(Errc::InvalidArgument, "unhandled algorithm");
}

}  // namespace chd
