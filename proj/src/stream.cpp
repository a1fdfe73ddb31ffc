#include "advstream/stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace advstream {

FrequencyVector apply_update(FrequencyVector f, const StreamUpdate& u, const StreamModel& model) {
    if (u.index < 1 || u.index > model.universe_size) {
        throw MalformedStream("update index " + std::to_string(u.index) + " outside universe [1, " +
                              std::to_string(model.universe_size) + "]");
    }
    if (model.mode == StreamMode::InsertionOnly && u.delta < 0) {
        throw MalformedStream("negative delta " + std::to_string(u.delta) + " in insertion-only stream");
    }
    std::int64_t& slot = f.counts_[static_cast<std::size_t>(u.index - 1)];
    const std::int64_t next = slot + u.delta;
    if (std::llabs(next) > model.max_coord) {
        throw MalformedStream("coordinate " + std::to_string(u.index) + " magnitude " +
                              std::to_string(next) + " exceeds bound " + std::to_string(model.max_coord));
    }
    slot = next;
    return f;
}

std::string QueryFunction::name() const {
    if (kind_ == Kind::F0) return "f0";
    if (p_ == 2.0) return "f2";
    std::ostringstream os;
    os << "fp:" << p_;
    return os.str();
}

double evaluate_query(const QueryFunction& g, std::span<const std::int64_t> counts) {
    if (g.is_distinct_count()) {
        std::int64_t nonzero = 0;
        for (std::int64_t c : counts) nonzero += (c != 0);
        return static_cast<double>(nonzero);
    }
    const double p = g.moment();
    double sum = 0.0;
    if (p == 2.0) {
        for (std::int64_t c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
    } else if (p == 1.0) {
        for (std::int64_t c : counts) sum += std::abs(static_cast<double>(c));
    } else {
        for (std::int64_t c : counts) {
            if (c != 0) sum += std::pow(std::abs(static_cast<double>(c)), p);
        }
    }
    return sum;
}

double evaluate_query(const QueryFunction& g, const FrequencyVector& f) {
    return evaluate_query(g, f.counts());
}

bool in_relative_window(double value, double center, double eps) {
    const double e0 = (1.0 - eps) * center;
    const double e1 = (1.0 + eps) * center;
    return std::min(e0, e1) <= value && value <= std::max(e0, e1);
}

std::int64_t flip_number(std::span<const double> values, double eps) {
    if (values.empty()) throw ConfigError("flip_number needs a nonempty sequence");
    // Collapse runs of equal consecutive values: a value always lies in its
    // own window, so two equal neighbours cannot both appear in a chain.
    std::vector<double> y;
    y.reserve(values.size());
    for (double v : values) {
        if (y.empty() || y.back() != v) y.push_back(v);
    }
    const std::size_t d = y.size();
    // chain[i] = longest valid chain ending at i. The membership test is
    // directional: the earlier chosen value must leave the window around the
    // later one.
    std::vector<std::int32_t> chain(d, 1);
    std::int64_t best = 1;
    for (std::size_t i = 1; i < d; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (!in_relative_window(y[j], y[i], eps) && chain[j] + 1 > chain[i]) {
                chain[i] = chain[j] + 1;
            }
        }
        best = std::max<std::int64_t>(best, chain[i]);
    }
    return best;
}

std::int64_t flip_number_bound(const QueryFunction& g, double eps, std::int64_t n, std::int64_t m) {
    if (eps <= 0.0) throw ConfigError("flip_number_bound: eps = 0 leaves the flip number unbounded");
    constexpr double kConstant = 8.0;
    double raw;
    if (g.is_distinct_count()) {
        raw = kConstant * std::log(static_cast<double>(m)) / eps;
    } else if (g.moment() <= 2.0) {
        raw = kConstant * std::log(static_cast<double>(n)) / eps;
    } else {
        raw = kConstant * g.moment() * std::log(static_cast<double>(n)) / eps;
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

std::vector<StreamUpdate> parse_stream(std::istream& in) {
    std::vector<StreamUpdate> updates;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        StreamUpdate u;
        if (!(fields >> u.index >> u.delta)) {
            throw ConfigError("stream line " + std::to_string(lineno) + ": expected 'index delta'");
        }
        updates.push_back(u);
    }
    return updates;
}

std::vector<StreamUpdate> load_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open stream file: " + path);
    return parse_stream(in);
}

void save_stream(const std::string& path, std::span<const StreamUpdate> updates) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write stream file: " + path);
    for (const StreamUpdate& u : updates) out << u.index << ' ' << u.delta << '\n';
}

}  // namespace advstream
