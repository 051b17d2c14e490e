#include "billiard/polyio.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace billiard {

namespace {

bool looks_numeric(const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
              c == '.' || c == '/' || c == 'e' || c == 'E'))
            return false;
    return true;
}

Rat rat_from_decimal(const std::string& t) {
    auto dot = t.find('.');
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    std::size_t frac_digits = t.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw GeometryError("malformed number: " + t);
    mpz_class num(digits, 10);  // base 0 default would read leading zeros as octal
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
    Rat q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

template <>
Rat parse_scalar<Rat>(const std::string& token) {
    if (!looks_numeric(token) || token.find('e') != std::string::npos ||
        token.find('E') != std::string::npos)
        throw GeometryError("malformed rational scalar: " + token);
    try {
        if (token.find('.') != std::string::npos) {
            if (token.find('/') != std::string::npos)
                throw GeometryError("malformed rational scalar: " + token);
            return rat_from_decimal(token);
        }
        Rat q(token, 10);
        if (q.get_den() == 0) throw GeometryError("zero denominator: " + token);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw GeometryError("malformed rational scalar: " + token);
    }
}

template <>
double parse_scalar<double>(const std::string& token) {
    if (!looks_numeric(token)) throw GeometryError("malformed scalar: " + token);
    auto slash = token.find('/');
    try {
        if (slash != std::string::npos) {
            double num = std::stod(token.substr(0, slash));
            double den = std::stod(token.substr(slash + 1));
            if (den == 0) throw GeometryError("zero denominator: " + token);
            return num / den;
        }
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size()) throw GeometryError("malformed scalar: " + token);
        return v;
    } catch (const std::invalid_argument&) {
        throw GeometryError("malformed scalar: " + token);
    } catch (const std::out_of_range&) {
        throw GeometryError("scalar out of range: " + token);
    }
}

template <class S>
Polygon<S> parse_polygon_text(const std::string& text, long certify_max_den) {
    std::vector<Point<S>> vertices;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string xs, ys, extra;
        if (!(ls >> xs)) continue;  // blank
        if (!(ls >> ys) || (ls >> extra))
            throw GeometryError("polygon line " + std::to_string(lineno) +
                                ": expected \"x y\"");
        vertices.push_back({parse_scalar<S>(xs), parse_scalar<S>(ys)});
    }
    return Polygon<S>::build(std::move(vertices), certify_max_den);
}

template <class S>
Polygon<S> load_polygon(const std::string& path, long certify_max_den) {
    std::ifstream in(path);
    if (!in) throw GeometryError("cannot read polygon file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_polygon_text<S>(buf.str(), certify_max_den);
}

template <>
std::string format_scalar<Rat>(const Rat& value) {
    return value.get_str();
}

template <>
std::string format_scalar<double>(const double& value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return {buf, end};
}

template <class S>
std::string format_polygon(const Polygon<S>& p) {
    std::ostringstream out;
    for (std::size_t i = 0; i < p.size(); ++i)
        out << format_scalar<S>(p.vertex(i).x) << ' ' << format_scalar<S>(p.vertex(i).y)
            << '\n';
    return out.str();
}

template Polygon<Rat> parse_polygon_text<Rat>(const std::string&, long);
template Polygon<double> parse_polygon_text<double>(const std::string&, long);
template Polygon<Rat> load_polygon<Rat>(const std::string&, long);
template Polygon<double> load_polygon<double>(const std::string&, long);
template std::string format_polygon<Rat>(const Polygon<Rat>&);
template std::string format_polygon<double>(const Polygon<double>&);

}  // namespace billiard
