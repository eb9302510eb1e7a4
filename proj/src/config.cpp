#include <fstream>
#include <sstream>

#include "edgeval/config.hpp"
#include "edgeval/retrain.hpp"

namespace edgeval {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            if (!c.sections_.count(section)) {
                c.order_.push_back(section);
                c.sections_[section] = {};
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        c.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Config::serialize() const {
    std::ostringstream out;
    for (const std::string& section : order_) {
        out << "[" << section << "]\n";
        for (const auto& [k, v] : sections_.at(section)) out << k << " = " << v << "\n";
        out << "\n";
    }
    return out.str();
}

void Config::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file " + path);
    out << serialize();
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return false;
    for (const auto& [k, v] : it->second)
        if (k == key) return true;
    return false;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    if (!sections_.count(section)) {
        order_.push_back(section);
        sections_[section] = {};
    }
    for (auto& [k, v] : sections_[section])
        if (k == key) {
            v = value;
            return;
        }
    sections_[section].emplace_back(key, value);
}

std::string Config::get(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it != sections_.end())
        for (const auto& [k, v] : it->second)
            if (k == key) return v;
    throw ConfigError("missing config key [" + section + "] " + key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(get(section, key));
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + " is not a number");
    }
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::int64_t fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stoll(get(section, key));
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + " is not an integer");
    }
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key);
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError("[" + section + "] " + key + " is not a boolean");
}

std::vector<std::string> Config::get_list(const std::string& section,
                                          const std::string& key) const {
    std::vector<std::string> out;
    if (!has(section, key)) return out;
    std::istringstream in(get(section, key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> Config::entries(
    const std::string& section) const {
    auto it = sections_.find(section);
    return it == sections_.end() ? std::vector<std::pair<std::string, std::string>>{}
                                 : it->second;
}

bool Config::operator==(const Config& other) const {
    return order_ == other.order_ && sections_ == other.sections_;
}

namespace {

template <typename T>
std::vector<T> parse_number_list(const std::vector<std::string>& items, const char* what) {
    std::vector<T> out;
    for (const std::string& s : items) {
        try {
            out.push_back(static_cast<T>(std::stoll(s)));
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": bad list entry '" + s + "'");
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& items) {
    std::vector<std::string> s;
    for (T v : items) s.push_back(std::to_string(v));
    return join(s);
}

} // namespace

RunConfig RunConfig::from_config(const Config& c) {
    RunConfig r;
    r.raw = c;
    r.dataset_name = c.get_or("dataset", "name", r.dataset_name);
    r.dataset_path = c.get_or("dataset", "path", "");
    r.generator_seed = static_cast<std::uint64_t>(
        c.get_int("dataset", "generator_seed", static_cast<std::int64_t>(r.generator_seed)));

    r.arch.kind = arch_from_name(c.get_or("model", "arch", "gcn"));
    r.arch.hidden_dim = static_cast<std::size_t>(c.get_int("model", "hidden_dim", 64));
    r.arch.layer_count = static_cast<std::size_t>(c.get_int("model", "layers", 3));

    r.train.epochs = static_cast<std::size_t>(c.get_int("train", "epochs", 100));
    r.train.batch_size = static_cast<std::size_t>(c.get_int("train", "batch_size", 64));
    r.train.learning_rate = c.get_double("train", "learning_rate", 0.001);
    r.train.early_stop_patience =
        static_cast<std::size_t>(c.get_int("train", "early_stop_patience", 0));
    r.train.rng_seed = static_cast<std::uint64_t>(c.get_int("train", "seed", 1));

    if (c.has("evaluate", "attributors")) r.attributors = c.get_list("evaluate", "attributors");
    r.sparsity_levels = c.has("evaluate", "sparsity_levels")
                            ? parse_number_list<int>(c.get_list("evaluate", "sparsity_levels"),
                                                     "sparsity_levels")
                            : kDefaultSparsityLevels;
    if (c.has("evaluate", "retrain_seeds"))
        r.retrain_seeds = parse_number_list<std::uint64_t>(
            c.get_list("evaluate", "retrain_seeds"), "retrain_seeds");
    if (c.has("evaluate", "random_seeds"))
        r.random_seeds = parse_number_list<std::uint64_t>(c.get_list("evaluate", "random_seeds"),
                                                          "random_seeds");
    r.eliminate_isolated = c.get_bool("evaluate", "eliminate_isolated", true);
    r.workers = static_cast<std::size_t>(c.get_int("evaluate", "workers", 1));
    r.out_dir = c.get_or("output", "dir", r.out_dir);
    return r;
}

Config RunConfig::to_config() const {
    Config c = raw;
    c.set("dataset", "name", dataset_name);
    if (!dataset_path.empty()) c.set("dataset", "path", dataset_path);
    c.set("dataset", "generator_seed", std::to_string(generator_seed));
    c.set("model", "arch", arch_name(arch.kind));
    c.set("model", "hidden_dim", std::to_string(arch.hidden_dim));
    c.set("model", "layers", std::to_string(arch.layer_count));
    c.set("train", "epochs", std::to_string(train.epochs));
    c.set("train", "batch_size", std::to_string(train.batch_size));
    std::ostringstream lr;
    lr << train.learning_rate;
    c.set("train", "learning_rate", lr.str());
    c.set("train", "early_stop_patience", std::to_string(train.early_stop_patience));
    c.set("train", "seed", std::to_string(train.rng_seed));
    c.set("evaluate", "attributors", join(attributors));
    c.set("evaluate", "sparsity_levels", join_numbers(sparsity_levels));
    c.set("evaluate", "retrain_seeds", join_numbers(retrain_seeds));
    c.set("evaluate", "random_seeds", join_numbers(random_seeds));
    c.set("evaluate", "eliminate_isolated", eliminate_isolated ? "true" : "false");
    c.set("evaluate", "workers", std::to_string(workers));
    c.set("output", "dir", out_dir);
    return c;
}

} // namespace edgeval
