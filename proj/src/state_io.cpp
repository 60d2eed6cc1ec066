#include "car/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "car/car_algebra.hpp"
#include "car/format.hpp"
#include "car/subalgebra.hpp"

namespace car {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return in;
}

std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::size_t stop = line.find_last_not_of(" \t\r");
        return line.substr(start, stop - start + 1);
    }
    return {};
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

// Parses "key=value ..." fields where values may contain spaces (monomials);
// a token with '=' starts a new field, later tokens extend the current value.
std::vector<std::pair<std::string, std::string>> split_fields(const std::vector<std::string>& tokens,
                                                              std::size_t from) {
    std::vector<std::pair<std::string, std::string>> fields;
    for (std::size_t i = from; i < tokens.size(); ++i) {
        const std::string& token = tokens[i];
        const std::size_t eq = token.find('=');
        if (eq != std::string::npos) {
            fields.emplace_back(token.substr(0, eq), token.substr(eq + 1));
        } else if (!fields.empty()) {
            if (!fields.back().second.empty()) fields.back().second += ' ';
            fields.back().second += token;
        } else {
            throw std::runtime_error("unexpected token '" + token + "'");
        }
    }
    return fields;
}

std::string find_field(const std::vector<std::pair<std::string, std::string>>& fields,
                       const std::string& key, const char* context) {
    for (const auto& [k, v] : fields) {
        if (k == key) return v;
    }
    throw std::runtime_error(std::string(context) + ": missing field '" + key + "='");
}

} // namespace

void write_matrix_literal(std::ostream& out, const Matrix& m) {
    out << "dim " << m.rows() << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << format_complex(m(r, c));
        }
        out << "\n";
    }
}

Matrix read_matrix_literal(std::istream& in) {
    std::string line = next_content_line(in);
    std::istringstream header(line);
    std::string word;
    Eigen::Index dim = 0;
    header >> word >> dim;
    if (word != "dim" || dim <= 0) {
        throw std::runtime_error("matrix literal: expected 'dim <d>', got '" + line + "'");
    }
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        line = next_content_line(in);
        if (line.empty()) throw std::runtime_error("matrix literal: truncated at row " + std::to_string(r));
        std::vector<std::string> entries = split_tokens(line);
        if (static_cast<Eigen::Index>(entries.size()) != dim) {
            throw std::runtime_error("matrix literal: row " + std::to_string(r) + " has " +
                                     std::to_string(entries.size()) + " entries, expected " +
                                     std::to_string(dim));
        }
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = parse_complex(entries[static_cast<std::size_t>(c)]);
    }
    return m;
}

void write_state_payload(std::ostream& out, const StateFilePayload& payload) {
    out << "n=" << payload.ambient << "\n";
    out << "region=" << payload.region.str() << "\n";
    write_matrix_literal(out, payload.compressed);
}

void write_state_payload(const std::string& path, const StateFilePayload& payload) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_state_payload(out, payload);
}

StateFilePayload read_state_payload(std::istream& in) {
    int ambient = -1;
    std::string region_text;
    bool have_region = false;
    for (int k = 0; k < 2; ++k) {
        std::string line = next_content_line(in);
        if (line.rfind("n=", 0) == 0) {
            ambient = std::stoi(line.substr(2));
        } else if (line.rfind("region=", 0) == 0) {
            region_text = line.substr(7);
            have_region = true;
        } else {
            throw std::runtime_error("state file: expected 'n=' and 'region=' headers, got '" + line + "'");
        }
    }
    if (ambient < 1 || !have_region) throw std::runtime_error("state file: incomplete header");
    ModeSet region = ModeSet::parse(ambient, region_text);
    Matrix compressed = read_matrix_literal(in);
    const Eigen::Index want = Eigen::Index(1) << region.size();
    if (compressed.rows() != want) {
        throw std::runtime_error("state file: matrix dimension " + std::to_string(compressed.rows()) +
                                 " does not match region size " + std::to_string(region.size()));
    }
    return {ambient, std::move(region), std::move(compressed)};
}

StateFilePayload read_state_payload(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_state_payload(in);
}

void write_state_file(std::ostream& out, const StateDensity& state) {
    write_state_payload(out, {state.ambient(), state.region(), compress(state.op(), state.region())});
}

void write_state_file(const std::string& path, const StateDensity& state) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_state_file(out, state);
}

StateDensity read_state_file(std::istream& in, const StateValidationOptions& opts) {
    StateFilePayload payload = read_state_payload(in);
    return StateDensity(embed(payload.compressed, payload.region, payload.ambient), payload.region, opts);
}

StateDensity read_state_file(const std::string& path, const StateValidationOptions& opts) {
    std::ifstream in = open_input(path);
    return read_state_file(in, opts);
}

namespace {

RegionPair parse_regions_line(const std::string& line) {
    std::vector<std::string> tokens = split_tokens(line);
    if (tokens.empty() || tokens[0] != "regions") {
        throw std::runtime_error("family spec: expected a 'regions I=... J=... n=...' first line");
    }
    auto fields = split_fields(tokens, 1);
    const int ambient = std::stoi(find_field(fields, "n", "regions line"));
    ModeSet i_set = ModeSet::parse(ambient, find_field(fields, "I", "regions line"));
    ModeSet j_set = ModeSet::parse(ambient, find_field(fields, "J", "regions line"));
    return RegionPair(std::move(i_set), std::move(j_set));
}

StateDensity make_marginal(const std::string& descriptor, const ModeSet& region, const std::string& path_dir) {
    std::vector<std::string> tokens = split_tokens(descriptor);
    if (tokens.empty()) throw std::runtime_error("marginal: empty constructor");
    const std::string& kind = tokens[0];
    if (kind == "tracial") {
        return StateDensity::tracial(region);
    }
    if (kind == "pure") {
        std::string text;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            if (!text.empty()) text += ' ';
            text += tokens[i];
        }
        Monomial m = Monomial::parse(text);
        if (!m.support(region.ambient()).subset_of(region)) {
            throw std::runtime_error("marginal 'pure " + text + "': support outside region {" +
                                     region.str() + "}");
        }
        for (const auto& f : m.factors()) {
            if (factor_parity(f.kind) == Parity::Odd) {
                throw std::runtime_error("marginal 'pure " + text +
                                         "': only projector factors n<k>/h<k> give a state");
            }
        }
        CarOperator op = monomial_matrix(m, region.ambient());
        const double t = tau(op).real();
        return StateDensity((1.0 / t) * op, region);
    }
    if (kind == "random") {
        if (tokens.size() != 2) throw std::runtime_error("marginal 'random': expected a seed");
        const auto seed = static_cast<std::uint64_t>(std::stoull(tokens[1]));
        const double floor = std::min(1e-4, 0.25 * std::pow(2.0, -region.size()));
        return random_even_faithful_state(region, seed, floor);
    }
    if (kind == "file") {
        if (tokens.size() != 2) throw std::runtime_error("marginal 'file': expected a path");
        std::string path = tokens[1];
        if (!path_dir.empty() && path.front() != '/') path = path_dir + "/" + path;
        std::ifstream in = open_input(path);
        Matrix m = read_matrix_literal(in);
        const Eigen::Index want = Eigen::Index(1) << region.size();
        if (m.rows() != want) {
            throw std::runtime_error("marginal file '" + path + "': dimension mismatch for region {" +
                                     region.str() + "}");
        }
        return StateDensity(embed(m, region, region.ambient()), region);
    }
    throw std::runtime_error("marginal: unknown constructor '" + kind + "'");
}

std::string directory_of(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

} // namespace

MixtureSpec read_prop4_spec_file(const std::string& path) {
    std::ifstream in = open_input(path);
    const std::string dir = directory_of(path);
    RegionPair regions = parse_regions_line(next_content_line(in));

    std::vector<double> weights;
    std::vector<MarginalTriple> triples;
    std::string line = next_content_line(in);
    while (!line.empty()) {
        std::vector<std::string> tokens = split_tokens(line);
        if (tokens[0] != "term") throw std::runtime_error("mixture spec: expected 'term w=...', got '" + line + "'");
        auto fields = split_fields(tokens, 1);
        weights.push_back(std::stod(find_field(fields, "w", "term line")));

        std::array<std::string, 3> descriptors;
        for (int k = 0; k < 3; ++k) {
            std::string marginal_line = next_content_line(in);
            const std::string key = "m" + std::to_string(k + 1) + "=";
            if (marginal_line.rfind(key, 0) != 0) {
                throw std::runtime_error("mixture spec: expected '" + key + "...', got '" + marginal_line + "'");
            }
            descriptors[static_cast<std::size_t>(k)] = marginal_line.substr(key.size());
        }
        StateDensity w1 = make_marginal(descriptors[0], regions.i_minus_j(), dir);
        StateDensity w2 = make_marginal(descriptors[1], regions.intersection(), dir);
        StateDensity w3 = make_marginal(descriptors[2], regions.j_minus_i(), dir);
        triples.emplace_back(std::move(w1), std::move(w2), std::move(w3));

        line = next_content_line(in);
    }
    return MixtureSpec(std::move(weights), std::move(triples), std::move(regions));
}

Prop5Spec read_prop5_spec_file(const std::string& path) {
    std::ifstream in = open_input(path);
    RegionPair regions = parse_regions_line(next_content_line(in));

    bool have_cplus = false;
    Monomial c_plus;
    std::vector<MonomialTermSpec> terms;
    std::string line = next_content_line(in);
    while (!line.empty()) {
        if (line.rfind("Cplus=", 0) == 0) {
            Monomial parsed = Monomial::parse(line.substr(6));
            if (have_cplus) {
                throw std::runtime_error(parsed == c_plus
                                             ? "monomial spec: duplicate Cplus line"
                                             : "monomial spec: two distinct C+ monomials violate the "
                                               "shared even factor constraint");
            }
            c_plus = std::move(parsed);
            have_cplus = true;
        } else {
            std::vector<std::string> tokens = split_tokens(line);
            if (tokens[0] != "term") {
                throw std::runtime_error("monomial spec: expected 'term ...' or 'Cplus=...', got '" + line + "'");
            }
            auto fields = split_fields(tokens, 1);
            const double alpha = std::stod(find_field(fields, "alpha", "term line"));
            Monomial a = Monomial::parse(find_field(fields, "A", "term line"));
            Monomial b = Monomial::parse(find_field(fields, "B", "term line"));
            ModeSet k = ModeSet::parse(regions.ambient(), find_field(fields, "K", "term line"));
            terms.emplace_back(alpha, std::move(a), std::move(b), std::move(k));
        }
        line = next_content_line(in);
    }
    if (!have_cplus) throw std::runtime_error("monomial spec: missing the global Cplus= line");
    return Prop5Spec(std::move(terms), std::move(c_plus), std::move(regions));
}

} // namespace car
