#pragma once

// Synthetic multi-objective learner over the LCBench search space. Each run
// snapshots a learning curve on a fixed epoch grid and returns one model per
// epoch with (accuracy loss, normalized energy).

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prefpareto/core_mo.hpp"
#include "prefpareto/random.hpp"

namespace prefpareto::bench {

enum class Hp : std::size_t {
    batch_size,
    learning_rate,
    momentum,
    weight_decay,
    num_layers,
    max_units,
    max_dropout,
};

inline constexpr std::size_t kNumHyperparameters = 7;

enum class ParamType { integer, real };
enum class Scale { linear, log };

struct ParamSpec {
    std::string name;
    ParamType type;
    double lower;
    double upper;
    Scale scale;
};

class ConfigSpace {
public:
    /// The seven LCBench hyperparameters.
    static ConfigSpace lcbench();

    const std::vector<ParamSpec>& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return params_.size(); }
    const ParamSpec& operator[](Hp hp) const { return params_[static_cast<std::size_t>(hp)]; }
    std::size_t index_of(std::string_view name) const;

private:
    std::vector<ParamSpec> params_;
};

struct Configuration {
    std::array<double, kNumHyperparameters> values{};

    double operator[](Hp hp) const { return values[static_cast<std::size_t>(hp)]; }
    double& operator[](Hp hp) { return values[static_cast<std::size_t>(hp)]; }

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Throws a parameter error when a value is out of range or not integral
/// where the space declares an integer.
void validate(const Configuration& cfg, const ConfigSpace& space);

Configuration sample_config(const ConfigSpace& space, Rng& rng);

/// Maps a parameter value to [0, 1]: normalized log for log-scaled parameters,
/// min-max otherwise.
double to_unit(const ParamSpec& p, double value);
/// Inverse of to_unit, rounding integers and clamping to range.
double from_unit(const ParamSpec& p, double unit);

struct DatasetProfile {
    std::int64_t profile_id = 0;
    std::array<double, 11> a{};  // a1..a11

    static DatasetProfile generate(std::int64_t profile_id);
};

struct EpochGrid {
    std::vector<int> epochs;

    /// 5, 10, ..., 50.
    static EpochGrid standard();
};

/// One model per epoch; model ids are the epoch grid positions.
std::vector<core::ModelPoint> run_moml(const Configuration& cfg, const DatasetProfile& profile,
                                       const EpochGrid& grid = EpochGrid::standard());

/// Model accuracy at one epoch, clamped to [0.01, 0.99].
double accuracy_at(const Configuration& cfg, const DatasetProfile& profile, int epoch);

/// Relative power draw in (0, 1].
double power_of(const Configuration& cfg);

}  // namespace prefpareto::bench
