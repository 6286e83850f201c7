#include "pentao/instances.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "pentao/errors.hpp"

namespace pentao {

namespace {

std::string seed_label(Seed seed) {
    std::ostringstream out;
    out << "seed=" << seed << " rng=" << kRngVersion;
    return out.str();
}

void sort_edges(Graph &g) { std::sort(g.edges.begin(), g.edges.end()); }

} // namespace

void validate_graph(const Graph &g) {
    if (g.n < 0) {
        throw InputError("graph: negative vertex count");
    }
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : g.edges) {
        if (i < 0 || j < 0 || i >= g.n || j >= g.n) {
            throw InputError("graph: edge endpoint out of range");
        }
        if (i == j) {
            throw InputError("graph: self-loop");
        }
        if (!seen.emplace(std::min(i, j), std::max(i, j)).second) {
            throw InputError("graph: repeated edge");
        }
    }
}

std::vector<int> degrees(const Graph &g) {
    std::vector<int> deg(static_cast<std::size_t>(g.n), 0);
    for (auto [i, j] : g.edges) {
        ++deg[static_cast<std::size_t>(i)];
        ++deg[static_cast<std::size_t>(j)];
    }
    return deg;
}

std::string describe(const WeightDistribution &dist) {
    std::ostringstream out;
    std::visit(
        [&out](const auto &d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, weights::Unit>) {
                out << "unit";
            } else if constexpr (std::is_same_v<T, weights::Poisson>) {
                out << "poisson(" << d.lambda << ")";
            } else if constexpr (std::is_same_v<T, weights::Normal>) {
                out << "normal(" << d.mean << "," << d.stddev << ")";
            } else {
                out << "pm1";
            }
        },
        dist);
    return out.str();
}

Graph gen_regular(int n, int d, Seed seed, int max_attempts) {
    if (n < 1 || d < 0 || d >= n || (static_cast<long>(n) * d) % 2 != 0) {
        std::ostringstream msg;
        msg << "gen_regular: no simple " << d << "-regular graph on " << n << " vertices";
        throw InputError(msg.str());
    }
    Rng rng(seed);
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (int v = 0; v < n; ++v) {
        stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);
    }
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        // Fisher-Yates with the portable bounded draw.
        for (std::size_t k = stubs.size(); k > 1; --k) {
            std::swap(stubs[k - 1], stubs[rng.below(k)]);
        }
        Graph g{n, {}};
        std::set<std::pair<int, int>> seen;
        bool simple = true;
        for (std::size_t k = 0; k < stubs.size(); k += 2) {
            const int a = std::min(stubs[k], stubs[k + 1]);
            const int b = std::max(stubs[k], stubs[k + 1]);
            if (a == b || !seen.emplace(a, b).second) {
                simple = false;
                break;
            }
            g.edges.emplace_back(a, b);
        }
        if (simple) {
            sort_edges(g);
            return g;
        }
    }
    std::ostringstream msg;
    msg << "gen_regular: no simple pairing found in " << max_attempts << " attempts";
    throw ResourceError(msg.str());
}

Graph grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw InputError("grid_graph: rows and cols must be >= 1");
    }
    Graph g{rows * cols, {}};
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int v = r * cols + c;
            if (c + 1 < cols) {
                g.edges.emplace_back(v, v + 1);
            }
            if (r + 1 < rows) {
                g.edges.emplace_back(v, v + cols);
            }
        }
    }
    sort_edges(g);
    return g;
}

Graph complete_graph(int n) {
    if (n < 1) {
        throw InputError("complete_graph: n must be >= 1");
    }
    Graph g{n, {}};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            g.edges.emplace_back(i, j);
        }
    }
    return g;
}

IsingInstance to_instance(const Graph &g, double w, std::string label) {
    validate_graph(g);
    std::vector<Coupling> couplings;
    couplings.reserve(g.edges.size());
    for (auto [i, j] : g.edges) {
        couplings.push_back({i, j, w});
    }
    return {std::max(g.n, 1), std::move(couplings), {}, std::move(label)};
}

IsingInstance assign_weights(const Graph &g, const WeightDistribution &dist, Seed seed) {
    validate_graph(g);
    if (const auto *p = std::get_if<weights::Poisson>(&dist); p && !(p->lambda > 0.0)) {
        throw InputError("assign_weights: Poisson mean must be positive");
    }
    if (const auto *p = std::get_if<weights::Normal>(&dist); p && !(p->stddev > 0.0)) {
        throw InputError("assign_weights: Normal stddev must be positive");
    }
    Rng rng(seed);
    std::vector<Coupling> couplings;
    couplings.reserve(g.edges.size());
    for (auto [i, j] : g.edges) {
        const double w = std::visit(
            [&rng](const auto &d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, weights::Unit>) {
                    return 1.0;
                } else if constexpr (std::is_same_v<T, weights::Poisson>) {
                    return static_cast<double>(rng.poisson(d.lambda));
                } else if constexpr (std::is_same_v<T, weights::Normal>) {
                    return rng.normal(d.mean, d.stddev);
                } else {
                    return rng.coin() ? 1.0 : -1.0;
                }
            },
            dist);
        couplings.push_back({i, j, w});
    }
    std::ostringstream label;
    label << "weights=" << describe(dist) << " " << seed_label(seed);
    return {std::max(g.n, 1), std::move(couplings), {}, label.str()};
}

IsingInstance gen_sk(int n, double h0, Seed seed) {
    if (n < 2) {
        throw InputError("gen_sk: n must be >= 2");
    }
    if (!std::isfinite(h0)) {
        throw InputError("gen_sk: h0 must be finite");
    }
    Rng rng(seed);
    std::vector<Coupling> couplings;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            couplings.push_back({i, j, rng.coin() ? 1.0 : -1.0});
        }
    }
    std::vector<Field> fields;
    for (int i = 0; i < n; ++i) {
        fields.push_back({i, h0});
    }
    std::ostringstream label;
    label << "sk n=" << n << " h0=" << h0 << " " << seed_label(seed);
    return {n, std::move(couplings), std::move(fields), label.str()};
}

// graph6 ---------------------------------------------------------------------

namespace {
constexpr std::string_view kGraph6Header = ">>graph6<<";
constexpr int kGraph6MaxShortN = 62;
} // namespace

Graph parse_graph6(std::string_view text) {
    std::size_t offset = 0;
    if (text.starts_with(kGraph6Header)) {
        offset = kGraph6Header.size();
    }
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (offset >= text.size()) {
        throw ParseError("graph6: empty input", offset);
    }
    const int first = static_cast<unsigned char>(text[offset]);
    if (first == 126) {
        throw ParseError("graph6: long-form size prefix (n > 62) is not supported", offset);
    }
    if (first < 63 || first > 126) {
        throw ParseError("graph6: invalid size byte", offset);
    }
    const int n = first - 63;
    const std::size_t pair_bits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1 < 0 ? 0 : n - 1) / 2;
    const std::size_t body = (pair_bits + 5) / 6;
    const std::size_t expected = offset + 1 + body;
    if (text.size() != expected) {
        std::ostringstream msg;
        msg << "graph6: expected " << body << " adjacency bytes for n=" << n << ", found "
            << (text.size() - offset - 1);
        throw ParseError(msg.str(), std::min(text.size(), expected));
    }
    for (std::size_t b = offset + 1; b < text.size(); ++b) {
        const int ch = static_cast<unsigned char>(text[b]);
        if (ch < 63 || ch > 126) {
            throw ParseError("graph6: adjacency byte outside [63, 126]", b);
        }
    }
    Graph g{n, {}};
    std::size_t k = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++k) {
            const int chunk = static_cast<unsigned char>(text[offset + 1 + k / 6]) - 63;
            if ((chunk >> (5 - static_cast<int>(k % 6))) & 1) {
                g.edges.emplace_back(i, j);
            }
        }
    }
    sort_edges(g);
    return g;
}

std::string encode_graph6(const Graph &g) {
    validate_graph(g);
    if (g.n > kGraph6MaxShortN) {
        throw InputError("encode_graph6: only n <= 62 is supported");
    }
    const int n = g.n;
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n)));
    for (auto [i, j] : g.edges) {
        adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
        adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
    }
    std::string out(1, static_cast<char>(n + 63));
    int chunk = 0;
    int filled = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            chunk = (chunk << 1) | (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ? 1 : 0);
            if (++filled == 6) {
                out.push_back(static_cast<char>(chunk + 63));
                chunk = 0;
                filled = 0;
            }
        }
    }
    if (filled > 0) {
        out.push_back(static_cast<char>((chunk << (6 - filled)) + 63));
    }
    return out;
}

std::vector<Graph> parse_graph6_lines(std::string_view text) {
    std::vector<Graph> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.remove_suffix(1);
        }
        if (!line.empty()) {
            try {
                out.push_back(parse_graph6(line));
            } catch (const ParseError &e) {
                throw ParseError(e.what(), start + e.position());
            }
        }
        start = end + 1;
    }
    return out;
}

// edge list ------------------------------------------------------------------

namespace {

template <typename T> bool parse_number(std::string_view token, T &out) {
    const auto *first = token.data();
    const auto *last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) {
            ++k;
        }
        const std::size_t start = k;
        while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) {
            ++k;
        }
        if (k > start) {
            out.push_back(line.substr(start, k - start));
        }
    }
    return out;
}

} // namespace

IsingInstance parse_edge_list(std::string_view text) {
    struct Term {
        int i, j;
        double w;
        std::size_t line;
    };
    std::vector<Term> terms;
    int declared_n = -1;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        auto line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tokens = split_ws(line);
        if (!tokens.empty()) {
            if (tokens[0] == "n") {
                if (tokens.size() != 2 || !parse_number(tokens[1], declared_n) || declared_n < 1) {
                    throw ParseError("edge list: malformed qubit-count line", line_no);
                }
                if (!terms.empty()) {
                    throw ParseError("edge list: qubit-count line must precede terms", line_no);
                }
            } else {
                Term t{};
                t.line = line_no;
                if (tokens.size() != 3 || !parse_number(tokens[0], t.i) ||
                    !parse_number(tokens[1], t.j) || !parse_number(tokens[2], t.w)) {
                    throw ParseError("edge list: expected \"i j w\" with numeric tokens", line_no);
                }
                if (t.i < 0 || t.j < 0 || (declared_n > 0 && (t.i >= declared_n || t.j >= declared_n))) {
                    throw ParseError("edge list: index out of range", line_no);
                }
                if (!std::isfinite(t.w)) {
                    throw ParseError("edge list: non-finite weight", line_no);
                }
                terms.push_back(t);
            }
        }
        if (end == text.size()) {
            break;
        }
        start = end + 1;
    }
    int n = declared_n;
    if (n < 0) {
        n = 1;
        for (const auto &t : terms) {
            n = std::max({n, t.i + 1, t.j + 1});
        }
    }
    std::vector<Coupling> couplings;
    std::vector<Field> fields;
    std::map<std::pair<int, int>, std::size_t> seen;
    for (const auto &t : terms) {
        const auto key = std::make_pair(std::min(t.i, t.j), std::max(t.i, t.j));
        if (auto [it, inserted] = seen.emplace(key, t.line); !inserted) {
            std::ostringstream msg;
            msg << "edge list: duplicate term (" << key.first << ", " << key.second
                << "), first seen on line " << it->second;
            throw ParseError(msg.str(), t.line);
        }
        if (t.i == t.j) {
            fields.push_back({t.i, t.w});
        } else {
            couplings.push_back({key.first, key.second, t.w});
        }
    }
    return {n, std::move(couplings), std::move(fields), "edge-list"};
}

} // namespace pentao
