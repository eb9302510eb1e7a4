#ifndef EDGEVAL_CONFIG_HPP
#define EDGEVAL_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "edgeval/models.hpp"

namespace edgeval {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

/// Flat key=value store grouped by [section] headers. Section and key order
/// are preserved so parse(serialize(c)) == c.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    std::string serialize() const;
    void save(const std::string& path) const;

    bool has(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    /// comma-separated list
    std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

    const std::vector<std::string>& section_names() const { return order_; }
    std::vector<std::pair<std::string, std::string>> entries(const std::string& section) const;

    bool operator==(const Config& other) const;

private:
    std::vector<std::string> order_;
    // section -> entries in insertion order
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

/// Everything one evaluation run needs, read out of a Config. Unrecognized
/// sections (per-attributor hyperparameters) stay accessible through `raw`.
struct RunConfig {
    std::string dataset_name = "ba2motifs";
    std::string dataset_path;          // TU directory; empty means "generate"
    std::uint64_t generator_seed = 7;

    ArchConfig arch;                   // input_dim/class_count filled at load time
    TrainConfig train;

    std::vector<std::string> attributors = {"random"};
    std::vector<int> sparsity_levels;
    std::vector<std::uint64_t> retrain_seeds = {1};
    std::vector<std::uint64_t> random_seeds = {1, 2, 3};
    bool eliminate_isolated = true;

    std::string out_dir = "out";
    std::size_t workers = 1;

    Config raw;

    static RunConfig from_config(const Config& c);
    Config to_config() const;
};

} // namespace edgeval

#endif
