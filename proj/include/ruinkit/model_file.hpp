#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ruinkit/errors.hpp"
#include "ruinkit/model.hpp"

namespace ruinkit {

// Model spec file: INI-style sections [process], [interclaims], [claims],
// [penalty] with key = value lines. Vectors are space-separated numbers,
// matrix rows are separated by ';'. '#' starts a comment. Unknown sections
// or keys are rejected.

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& text, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ParseError("model file: value of '" + key + "' is not a number: '" + text + "'");
    }
    if (pos != text.size()) throw ParseError("model file: trailing junk in value of '" + key + "'");
    if (!std::isfinite(v)) throw ParseError("model file: value of '" + key + "' is not finite");
    return v;
}

inline std::vector<double> parse_vector(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_number(tok, key));
    if (out.empty()) throw ParseError("model file: '" + key + "' needs at least one number");
    return out;
}

inline std::vector<std::vector<double>> parse_matrix(const std::string& text, const std::string& key) {
    std::vector<std::vector<double>> rows;
    std::string row;
    std::istringstream in(text);
    while (std::getline(in, row, ';')) rows.push_back(parse_vector(trim(row), key));
    return rows;
}

struct Section {
    std::map<std::string, std::string> kv;
    int line_of_header = 0;

    std::string take(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("model file: missing key '" + key + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    }

    std::optional<std::string> take_optional(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    }

    void reject_leftovers(const std::string& section) const {
        if (!kv.empty())
            throw ParseError("model file: unknown key '" + kv.begin()->first + "' in section [" + section + "]");
    }
};

inline PhaseType build_interclaims(Section& sec) {
    const std::string kind = trim(sec.take("kind"));
    if (kind == "exponential") {
        return PhaseType::exponential(parse_number(sec.take("rate"), "rate"));
    }
    if (kind == "generalized_erlang") {
        return PhaseType::generalized_erlang(parse_vector(sec.take("rates"), "rates"));
    }
    if (kind == "coxian") {
        const auto rates = parse_vector(sec.take("rates"), "rates");
        std::vector<double> cont;
        if (auto v = sec.take_optional("continue")) cont = parse_vector(*v, "continue");
        return PhaseType::coxian(rates, cont);
    }
    if (kind == "phase_type") {
        const auto alpha = parse_vector(sec.take("alpha"), "alpha");
        const auto rows = parse_matrix(sec.take("B"), "B");
        const std::size_t n = alpha.size();
        if (rows.size() != n) throw ParseError("model file: B must have one row per alpha entry");
        Eigen::MatrixXd B(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw ParseError("model file: B row " + std::to_string(i) + " has wrong length");
            for (std::size_t j = 0; j < n; ++j) B(i, j) = rows[i][j];
        }
        Eigen::VectorXd a(n);
        for (std::size_t i = 0; i < n; ++i) a(i) = alpha[i];
        if (auto bv = sec.take_optional("b")) {
            const auto bvec = parse_vector(*bv, "b");
            if (bvec.size() != n) throw ParseError("model file: b has wrong length");
            Eigen::VectorXd b(n);
            for (std::size_t i = 0; i < n; ++i) b(i) = bvec[i];
            return PhaseType::validated(std::move(a), std::move(B), b);
        }
        return PhaseType::validated(std::move(a), std::move(B));
    }
    throw ParseError("model file: unknown interclaims kind '" + kind + "'");
}

inline RationalClaim build_claims(Section& sec) {
    const std::string kind = trim(sec.take("kind"));
    if (kind == "exponential") return RationalClaim::exponential(parse_number(sec.take("beta"), "beta"));
    if (kind == "erlang") {
        const double k = parse_number(sec.take("k"), "k");
        if (k != std::floor(k)) throw ParseError("model file: erlang k must be an integer");
        return RationalClaim::erlang(static_cast<int>(k), parse_number(sec.take("beta"), "beta"));
    }
    if (kind == "hyperexponential")
        return RationalClaim::hyperexponential(parse_vector(sec.take("weights"), "weights"),
                                               parse_vector(sec.take("rates"), "rates"));
    if (kind == "rational") {
        const auto top = parse_vector(sec.take("r_top"), "r_top");
        const auto bot = parse_vector(sec.take("r_bot"), "r_bot");
        std::vector<Cx> ct(top.begin(), top.end()), cb(bot.begin(), bot.end());
        return RationalClaim::from_polys(Poly(std::move(ct)), Poly(std::move(cb)));
    }
    throw ParseError("model file: unknown claims kind '" + kind + "'");
}

inline Penalty build_penalty(Section& sec) {
    const std::string kind = trim(sec.take("kind"));
    double w0 = 1.0;
    if (auto v = sec.take_optional("w0")) w0 = parse_number(*v, "w0");
    if (kind == "unit") return Penalty::unit(w0);
    if (kind == "bivariate_exponential")
        return Penalty::bivariate_exponential(parse_number(sec.take("s1"), "s1"),
                                              parse_number(sec.take("s2"), "s2"), w0);
    if (kind == "deficit_power") {
        const double j = parse_number(sec.take("j"), "j");
        if (j != std::floor(j)) throw ParseError("model file: deficit power j must be an integer");
        return Penalty::deficit_power(static_cast<int>(j), w0);
    }
    throw ParseError("model file: unknown penalty kind '" + kind + "'");
}

} // namespace detail

inline RiskModel parse_model(std::istream& in) {
    std::map<std::string, detail::Section> sections;
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("model file line " + std::to_string(lineno) + ": bad section header");
            current = detail::trim(line.substr(1, line.size() - 2));
            if (current != "process" && current != "interclaims" && current != "claims" && current != "penalty")
                throw ParseError("model file: unknown section [" + current + "]");
            if (sections.count(current)) throw ParseError("model file: duplicate section [" + current + "]");
            sections[current].line_of_header = lineno;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || current.empty())
            throw ParseError("model file line " + std::to_string(lineno) + ": expected 'key = value' inside a section");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("model file line " + std::to_string(lineno) + ": empty key or value");
        if (!sections[current].kv.emplace(key, value).second)
            throw ParseError("model file line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    for (const char* required : {"process", "interclaims", "claims", "penalty"})
        if (!sections.count(required)) throw ParseError(std::string("model file: missing section [") + required + "]");

    detail::Section& proc = sections["process"];
    const double c = detail::parse_number(proc.take("c"), "c");
    const double sigma = detail::parse_number(proc.take("sigma"), "sigma");
    const double delta = detail::parse_number(proc.take("delta"), "delta");
    proc.reject_leftovers("process");

    PhaseType interclaims = detail::build_interclaims(sections["interclaims"]);
    sections["interclaims"].reject_leftovers("interclaims");
    RationalClaim claims = detail::build_claims(sections["claims"]);
    sections["claims"].reject_leftovers("claims");
    Penalty penalty = detail::build_penalty(sections["penalty"]);
    sections["penalty"].reject_leftovers("penalty");

    return RiskModel{c, sigma, delta, std::move(interclaims), std::move(claims), penalty};
}

inline RiskModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("model file: cannot open '" + path + "'");
    return parse_model(in);
}

} // namespace ruinkit
