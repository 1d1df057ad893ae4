#pragma once

#include <string>
#include <variant>

#include "riskscope/forest.hpp"
#include "riskscope/gbdt.hpp"
#include "riskscope/logistic.hpp"

namespace riskscope::learn {

/// A fitted classifier plus the feature layout it was trained on. All model
/// kinds share the probability-prediction contract.
struct ModelArtifact {
  std::variant<LogisticModel, Forest, BoostedEnsemble> model;
  std::vector<ColumnMeta> layout;

  const char* kind() const;
};

/// Dispatches on the model kind; raises DimensionMismatch/LayoutMismatch when
/// x does not match the training layout.
double predict_proba(const ModelArtifact& artifact, std::span<const double> x);

/// Probabilities for every row of a matrix with the same layout.
std::vector<double> predict_proba_matrix(const ModelArtifact& artifact, const FeatureMatrix& X);

/// Versioned JSON document; numbers round-trip bit-exactly.
std::string model_to_json(const ModelArtifact& artifact);
ModelArtifact model_from_json(const std::string& text);

}  // namespace riskscope::learn
