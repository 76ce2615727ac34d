#include "whsim/scenario.hpp"

#include "whsim/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace whsim {

ComplexMatrix Scenario::covariance(double sigma1_abs) const {
    const double k = sigma1_abs / sigma1;
    const std::vector<double> sigmas = {sigma1 * k, sigma2 * k, sigma3 * k, sigma4 * k};
    ComplexMatrix r(4, 4);
    r(0, 1) = r12;
    r(0, 2) = r13;
    r(0, 3) = r14;
    r(1, 2) = r23;
    r(1, 3) = r24;
    r(2, 3) = r34;
    return build_covariance(sigmas, r);
}

ChannelModel Scenario::model4(double snr_db, double symbol_power) const {
    const double snr = std::pow(10.0, snr_db / 10.0);
    const double sigma1_abs = std::sqrt(std::norm(h1) * symbol_power / snr);
    ChannelModel model;
    model.n_s = 2;
    model.n_n = 2;
    model.h_s = {h1, h2};
    model.sigma = covariance(sigma1_abs);
    return model;
}

cdouble parse_complex(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw MalformedInput("parse_complex: empty value");

    const char* p = s.c_str();
    char* end = nullptr;

    auto read_part = [&](const char* from, char** out_end) -> double {
        if ((from[0] == '+' || from[0] == '-') && from[1] == 'i') {
            *out_end = const_cast<char*>(from + 1); // unit imaginary with sign
            return from[0] == '-' ? -1.0 : 1.0;
        }
        if (from[0] == 'i') {
            *out_end = const_cast<char*>(from);
            return 1.0;
        }
        errno = 0;
        double v = std::strtod(from, out_end);
        if (*out_end == from) throw MalformedInput("parse_complex: bad number in '" + s + "'");
        return v;
    };

    const double first = read_part(p, &end);
    if (*end == '\0') return {first, 0.0};
    if (*end == 'i' && end[1] == '\0') return {0.0, first};

    char* end2 = nullptr;
    const double second = read_part(end, &end2);
    if (*end2 == 'i' && end2[1] == '\0') return {first, second};
    throw MalformedInput("parse_complex: cannot parse '" + s + "' as a+bi");
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("load_scenario: cannot open " + path);

    Scenario sc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw MalformedInput("load_scenario: expected key = value at line " +
                                 std::to_string(line_no));
        }
        auto trim = [](std::string v) {
            const auto a = v.find_first_not_of(" \t");
            const auto b = v.find_last_not_of(" \t");
            return a == std::string::npos ? std::string{} : v.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw MalformedInput("load_scenario: empty value for '" + key + "'");
        }

        auto real_of = [&](const std::string& v) {
            const cdouble z = parse_complex(v);
            if (z.imag() != 0.0) {
                throw MalformedInput("load_scenario: '" + key + "' must be real");
            }
            return z.real();
        };

        if (key == "h1") sc.h1 = parse_complex(value);
        else if (key == "h2") sc.h2 = parse_complex(value);
        else if (key == "sigma1") sc.sigma1 = real_of(value);
        else if (key == "sigma2") sc.sigma2 = real_of(value);
        else if (key == "sigma3") sc.sigma3 = real_of(value);
        else if (key == "sigma4") sc.sigma4 = real_of(value);
        else if (key == "r12") sc.r12 = parse_complex(value);
        else if (key == "r13") sc.r13 = parse_complex(value);
        else if (key == "r14") sc.r14 = parse_complex(value);
        else if (key == "r23") sc.r23 = parse_complex(value);
        else if (key == "r24") sc.r24 = parse_complex(value);
        else if (key == "r34") sc.r34 = parse_complex(value);
        else throw MalformedInput("load_scenario: unknown key '" + key + "'");
    }
    return sc;
}

} // namespace whsim
