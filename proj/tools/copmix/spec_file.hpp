#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "copmix/gmm.hpp"
#include "copmix/marginal.hpp"
#include "copmix/mixture_fit.hpp"

namespace copmix::cli {

inline constexpr const char* kSpecSchema = "copmix-spec/1";

// Flat "key = value" text. '#' starts a comment, blank lines are ignored,
// the first key must be "schema" and unknown or repeated keys are errors.
class SpecFile {
public:
    static SpecFile parse(const std::string& text);
    static SpecFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<std::size_t> get_counts(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
};

// Comma-separated list parsers shared with command-line flags.
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
std::vector<std::size_t> parse_count_list(const std::string& text, const std::string& what);

enum class CopulaFamily { Example, Clayton, AliMikhailHaq, Gumbel, Frank, Gaussian };

struct CopulaSpec {
    CopulaFamily family = CopulaFamily::Example;
    std::size_t dim = 2;
    double alpha = 0.75;
    double beta = 0.5;
    double theta = 20.0;
    std::vector<double> correlation; // row-major, gaussian only
};

struct MarginSpec {
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> sds;
};

struct DiagnosticsSpec {
    std::size_t l1_samples = 100000;
    std::size_t grid = 100;
    std::size_t ks_samples = 0; // 0: use the data size, or 10000 without data
    bool finite_difference = false;
};

struct ExperimentSpec {
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::optional<CopulaSpec> copula;
    std::optional<MarginSpec> margin; // absent: data are the copula draws
    FitConfig fit;
    std::string transform = "normal";
    DiagnosticsSpec diagnostics;
};

// Validates ranges (n >= 100, weights on the simplex, parameters inside
// family ranges) and fills defaults.
ExperimentSpec to_experiment_spec(const SpecFile& file);

std::string to_string(CopulaFamily f);
std::shared_ptr<const Marginal> make_margin(const MarginSpec& m);

} // namespace copmix::cli
