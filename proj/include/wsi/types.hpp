#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wsi {

// Embedding matrices are accessed row-per-word in the training loops.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using WordId = int32_t;

// Marks a token that was dropped from the vocabulary but still occupies a
// window position in a token stream.
inline constexpr WordId kNoWord = -1;

struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSensesError : ContractError {
    using ContractError::ContractError;
};

struct EmptyContextError : ContractError {
    using ContractError::ContractError;
};

struct TrainingError : std::runtime_error {
    int epoch;
    TrainingError(int epoch_index, const std::string& message)
        : std::runtime_error("epoch " + std::to_string(epoch_index) + ": " + message),
          epoch(epoch_index) {}
};

struct SchemaError : std::runtime_error {
    std::string path;
    long line;
    SchemaError(std::string file, long line_number, const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line_number) + ": " + message),
          path(std::move(file)),
          line(line_number) {}
};

struct DependencyError : std::runtime_error {
    std::string artifact;
    explicit DependencyError(std::string missing)
        : std::runtime_error("missing artifact: " + missing), artifact(std::move(missing)) {}
};

inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow for large |x|.
inline double log_sigmoid(double x) {
    if (x >= 0.0) {
        return -std::log1p(std::exp(-x));
    }
    return x - std::log1p(std::exp(x));
}

inline double cosine(const Vector& a, const Vector& b) {
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return a.dot(b) / (na * nb);
}

}  // namespace wsi
