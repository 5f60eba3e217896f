#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace revnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base exception for every error raised by the toolkit. The message is
/// prefixed with the module that produced it ("ingest: ...").
class Error : public std::runtime_error {
public:
    Error(std::string_view module, const std::string& what)
        : std::runtime_error(std::string(module) + ": " + what) {}
};

/// Product-level ground truth. The positive class is a product that buys
/// fake reviews.
enum class Label : std::uint8_t { organic = 0, fake_buyer = 1 };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

/// Seeded random stream. Sampling helpers are written against the raw
/// mt19937_64 output so results do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for a sub-task, e.g. one tree or one restart.
    static Rng derive(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() { return engine_(); }
    double uniform();  // [0, 1)
    std::size_t index(std::size_t n);  // uniform in [0, n)
    double exponential(double mean);
    double normal();
    /// Draws a category from a probability vector (assumed normalized).
    std::size_t categorical(const double* probs, std::size_t n);

private:
    std::mt19937_64 engine_;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place, so a failed
/// run never leaves a truncated output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

}  // namespace revnet
