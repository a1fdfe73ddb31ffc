#include "advstream/set_system.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace advstream {

FiniteSetSystem FiniteSetSystem::explicit_ranges(std::int64_t universe_size,
                                                 const std::vector<std::vector<std::int64_t>>& ranges) {
    if (universe_size < 0) throw ConfigError("set system: negative universe size");
    FiniteSetSystem sys;
    sys.universe_ = universe_size;
    sys.words_ = static_cast<std::size_t>((universe_size + 63) / 64);
    std::set<std::vector<std::uint64_t>> seen;
    for (const auto& range : ranges) {
        std::vector<std::uint64_t> packed(sys.words_, 0);
        for (std::int64_t e : range) {
            if (e < 1 || e > universe_size) {
                throw ConfigError("set system: element " + std::to_string(e) + " outside universe");
            }
            packed[static_cast<std::size_t>((e - 1) / 64)] |= 1ULL << ((e - 1) % 64);
        }
        if (seen.insert(packed).second) sys.bits_.push_back(std::move(packed));
    }
    return sys;
}

FiniteSetSystem FiniteSetSystem::prefix_intervals(std::int64_t universe_size) {
    if (universe_size < 1) throw ConfigError("prefix system needs universe size >= 1");
    FiniteSetSystem sys;
    sys.universe_ = universe_size;
    sys.prefix_ = true;
    return sys;
}

FiniteSetSystem FiniteSetSystem::random_system(std::int64_t universe_size, std::int64_t range_count, Rng& rng) {
    std::vector<std::vector<std::int64_t>> ranges;
    ranges.reserve(static_cast<std::size_t>(range_count));
    for (std::int64_t r = 0; r < range_count; ++r) {
        std::vector<std::int64_t> range;
        for (std::int64_t e = 1; e <= universe_size; ++e) {
            if (rng.coin(0.5)) range.push_back(e);
        }
        ranges.push_back(std::move(range));
    }
    return explicit_ranges(universe_size, ranges);
}

std::int64_t FiniteSetSystem::range_count() const {
    return prefix_ ? universe_ : static_cast<std::int64_t>(bits_.size());
}

bool FiniteSetSystem::range_contains(std::int64_t range_idx, std::int64_t element) const {
    if (prefix_) return element >= 1 && element <= range_idx + 1;  // range b = idx+1
    const auto& packed = bits_[static_cast<std::size_t>(range_idx)];
    return (packed[static_cast<std::size_t>((element - 1) / 64)] >> ((element - 1) % 64)) & 1ULL;
}

std::vector<std::int64_t> FiniteSetSystem::range_elements(std::int64_t range_idx) const {
    std::vector<std::int64_t> out;
    for (std::int64_t e = 1; e <= universe_; ++e) {
        if (range_contains(range_idx, e)) out.push_back(e);
    }
    return out;
}

std::uint32_t FiniteSetSystem::trace_mask(std::int64_t range_idx, const std::vector<std::int64_t>& C) const {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < C.size(); ++i) {
        if (range_contains(range_idx, C[i])) mask |= 1u << i;
    }
    return mask;
}

std::vector<std::uint32_t> FiniteSetSystem::distinct_traces(const std::vector<std::int64_t>& C) const {
    std::set<std::uint32_t> traces;
    if (prefix_) {
        // [1,b] keeps exactly the elements of C that are <= b: the possible
        // traces are the |C|+1 "downward" masks in sorted order.
        std::vector<std::size_t> order(C.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return C[a] < C[b]; });
        std::uint32_t mask = 0;
        traces.insert(mask);
        for (std::size_t i : order) {
            mask |= 1u << i;
            traces.insert(mask);
        }
    } else {
        for (std::int64_t r = 0; r < range_count(); ++r) traces.insert(trace_mask(r, C));
    }
    return {traces.begin(), traces.end()};
}

FiniteSetSystem FiniteSetSystem::parse(std::istream& in) {
    std::string line;
    auto next_content_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            const auto first = out.find_first_not_of(" \t\r");
            if (first == std::string::npos || out[first] == '#') continue;
            return true;
        }
        return false;
    };
    if (!next_content_line(line)) throw ConfigError("set system file is empty");
    std::istringstream head(line);
    std::string word;
    head >> word;
    if (word == "prefix") {
        std::int64_t n = 0;
        if (!(head >> n)) throw ConfigError("set system: expected 'prefix N'");
        return prefix_intervals(n);
    }
    const std::int64_t universe = std::stoll(word);
    std::vector<std::vector<std::int64_t>> ranges;
    while (next_content_line(line)) {
        std::istringstream fields(line);
        std::vector<std::int64_t> range;
        std::int64_t e;
        while (fields >> e) range.push_back(e);
        ranges.push_back(std::move(range));
    }
    if (ranges.empty()) throw ConfigError("set system: no ranges listed");
    return explicit_ranges(universe, ranges);
}

FiniteSetSystem FiniteSetSystem::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open set system file: " + path);
    return parse(in);
}

void FiniteSetSystem::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write set system file: " + path);
    if (prefix_) {
        out << "prefix " << universe_ << '\n';
        return;
    }
    out << universe_ << '\n';
    for (std::int64_t r = 0; r < range_count(); ++r) {
        bool first = true;
        for (std::int64_t e : range_elements(r)) {
            if (!first) out << ' ';
            out << e;
            first = false;
        }
        out << '\n';
    }
}

FiniteSetSystem FiniteSetSystem::from_spec(const std::string& spec) {
    if (spec.rfind("prefix:", 0) == 0) {
        return prefix_intervals(std::stoll(spec.substr(7)));
    }
    return load(spec);
}

}  // namespace advstream
