#include "car/format.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace car {

std::string format_sci(double value) {
    if (value == 0.0) value = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", value);
    std::string text(buf);
    const std::size_t e = text.find('e');
    const int exponent = std::atoi(text.c_str() + e + 1);
    return text.substr(0, e) + "e" + std::to_string(exponent);
}

std::string format_complex(Complex value) {
    double re = value.real() == 0.0 ? 0.0 : value.real();
    double im = value.imag() == 0.0 ? 0.0 : value.imag();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", re, im);
    return buf;
}

Complex parse_complex(std::string_view text) {
    if (text.empty() || text.back() != 'j') {
        throw std::invalid_argument("parse_complex: expected trailing 'j' in '" + std::string(text) + "'");
    }
    std::string_view body = text.substr(0, text.size() - 1);
    // The imaginary part starts at the last sign that is not an exponent sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) {
        throw std::invalid_argument("parse_complex: missing imaginary part in '" + std::string(text) + "'");
    }
    const std::string re_text(body.substr(0, split));
    const std::string im_text(body.substr(split));
    char* end = nullptr;
    const double re = std::strtod(re_text.c_str(), &end);
    if (end != re_text.c_str() + re_text.size()) {
        throw std::invalid_argument("parse_complex: bad real part '" + re_text + "'");
    }
    const double im = std::strtod(im_text.c_str(), &end);
    if (end != im_text.c_str() + im_text.size()) {
        throw std::invalid_argument("parse_complex: bad imaginary part '" + im_text + "'");
    }
    return {re, im};
}

} // namespace car
