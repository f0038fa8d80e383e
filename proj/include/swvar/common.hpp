#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace swvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

/// Random engine used everywhere. Seeded explicitly; never shared across threads.
using Rng = std::mt19937_64;

/// Base class of all library errors. `code()` maps to the CLI exit status.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    virtual int code() const noexcept { return 3; }
};

/// Malformed shapes or inconsistent model structure.
class StructuralError : public Error {
  public:
    using Error::Error;
    int code() const noexcept override { return 2; }
};

/// Out-of-range scalar parameters (tail index, sparsity, rank, ...).
class ParameterError : public Error {
  public:
    using Error::Error;
    int code() const noexcept override { return 2; }
};

/// Bad or incomplete configuration (CLI / JSON).
class ConfigError : public Error {
  public:
    using Error::Error;
    int code() const noexcept override { return 2; }
};

/// Unreadable input or unwritable output.
class IoError : public Error {
  public:
    using Error::Error;
    int code() const noexcept override { return 2; }
};

class InsufficientDataError : public Error {
  public:
    using Error::Error;
    int code() const noexcept override { return 2; }
};

/// Spectral radius >= 1 where a stable process is required.
class StabilityError : public Error {
  public:
    using Error::Error;
};

/// A truncated series did not reach its tolerance within the term cap.
class TruncationError : public Error {
  public:
    TruncationError(const std::string& what, double partial)
        : Error(what), partial_(partial) {}
    double partial_value() const noexcept { return partial_; }

  private:
    double partial_;
};

/// Any other numerical breakdown (non-finite input, failed factorization).
class NumericalError : public Error {
  public:
    using Error::Error;
};

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entries");
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into index-addressed slots so
/// the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    threads = std::max(1u, threads);
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace swvar
