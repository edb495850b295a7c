#include "treegaze/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace treegaze::svg {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Scale {
    double d0, d1, r0, r1;
    double operator()(double v) const { return d1 == d0 ? (r0 + r1) / 2 : r0 + (v - d0) / (d1 - d0) * (r1 - r0); }
};

void header(std::ostream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
}

void y_axis(std::ostream& out, const Scale& y, const std::string& label) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = y.d0 + (y.d1 - y.d0) * i / 5.0;
        out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << num(y(v)) << "\" x2=\"" << kLeft << "\" y2=\"" << num(y(v))
            << "\" stroke=\"black\"/>\n<text x=\"" << kLeft - 7 << "\" y=\"" << num(y(v) + 4)
            << "\" text-anchor=\"end\">" << tick(v) << "</text>\n";
    }
    out << "<text transform=\"translate(16," << (kTop + kHeight - kBottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(label) << "</text>\n";
}

std::string stars(double p) {
    if (!(p < 0.05)) return "";
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    return "*";
}

}  // namespace

void bar_plot(std::ostream& out, std::span<const BarGroup> groups, const std::array<std::string, 2>& conditions,
              const std::string& title, const std::string& y_label) {
    double top = 0.0;
    for (const auto& g : groups)
        for (int c = 0; c < 2; ++c) top = std::max(top, g.mean[c] + g.sd[c]);
    top = top > 0 ? top * 1.15 : 1.0;
    const Scale y{0.0, top, kHeight - kBottom, kTop};
    header(out, title);
    y_axis(out, y, y_label);
    const char* fill[2] = {"#9e9e9e", "#3b6fb6"};
    const double span = (kWidth - kLeft - kRight) / std::max<std::size_t>(1, groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double x0 = kLeft + span * static_cast<double>(i) + span * 0.15;
        const double bw = span * 0.35;
        for (int c = 0; c < 2; ++c) {
            const double x = x0 + bw * c;
            out << "<rect x=\"" << num(x) << "\" y=\"" << num(y(g.mean[c])) << "\" width=\"" << num(bw - 2)
                << "\" height=\"" << num(y(0) - y(g.mean[c])) << "\" fill=\"" << fill[c] << "\"/>\n";
            const double cx = x + (bw - 2) / 2;
            out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y(std::max(0.0, g.mean[c] - g.sd[c]))) << "\" x2=\""
                << num(cx) << "\" y2=\"" << num(y(g.mean[c] + g.sd[c])) << "\" stroke=\"black\"/>\n";
        }
        out << "<text x=\"" << num(x0 + bw) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
            << escape(g.label) << "</text>\n";
        const auto s = stars(g.p);
        if (!s.empty())
            out << "<text x=\"" << num(x0 + bw) << "\" y=\"" << num(kTop + 12) << "\" text-anchor=\"middle\" font-size=\"16\">"
                << s << "</text>\n";
    }
    for (int c = 0; c < 2; ++c) {
        const double lx = kWidth - kRight - 150, ly = kHeight - 20 + 0.0 * c;
        out << "<rect x=\"" << num(lx + 75 * c) << "\" y=\"" << num(ly - 10) << "\" width=\"10\" height=\"10\" fill=\""
            << fill[c] << "\"/>\n<text x=\"" << num(lx + 75 * c + 14) << "\" y=\"" << num(ly) << "\">"
            << escape(conditions[static_cast<std::size_t>(c)]) << "</text>\n";
    }
    out << "</svg>\n";
}

void line_plot(std::ostream& out, const TimeCourse& course, const std::string& title, const std::string& y_label) {
    const auto n = course.time_ms.size();
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lo = std::min({lo, course.lo[i], course.mean[i]});
        hi = std::max({hi, course.hi[i], course.mean[i]});
    }
    if (hi == lo) hi = lo + 1.0;
    const double pad = (hi - lo) * 0.08;
    const Scale y{lo - pad, hi + pad, kHeight - kBottom, kTop};
    const Scale x{n ? course.time_ms.front() : 0.0, n ? course.time_ms.back() : 1.0, kLeft, kWidth - kRight};
    header(out, title);
    for (const auto& iv : course.shaded)
        out << "<rect x=\"" << num(x(iv.from)) << "\" y=\"" << kTop << "\" width=\"" << num(std::max(1.0, x(iv.to) - x(iv.from)))
            << "\" height=\"" << kHeight - kBottom - kTop << "\" fill=\"#f4d35e\" fill-opacity=\"0.35\"/>\n";
    y_axis(out, y, y_label);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << num(y(0)) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << num(y(0))
        << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    if (n > 0) {
        for (int i = 0; i <= 8; ++i) {
            const double t = x.d0 + (x.d1 - x.d0) * i / 8.0;
            out << "<text x=\"" << num(x(t)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
                << tick(t) << "</text>\n";
        }
        out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 18
            << "\" text-anchor=\"middle\">time from fixation onset (ms)</text>\n";
        out << "<polygon fill=\"#3b6fb6\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < n; ++i) out << num(x(course.time_ms[i])) << ',' << num(y(course.hi[i])) << ' ';
        for (std::size_t i = n; i-- > 0;) out << num(x(course.time_ms[i])) << ',' << num(y(course.lo[i])) << ' ';
        out << "\"/>\n<polyline fill=\"none\" stroke=\"#3b6fb6\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; ++i) out << num(x(course.time_ms[i])) << ',' << num(y(course.mean[i])) << ' ';
        out << "\"/>\n";
        const double dot_y = kTop + 6;
        for (std::size_t i = 0; i < n && i < course.significant.size(); ++i)
            if (course.significant[i])
                out << "<circle cx=\"" << num(x(course.time_ms[i])) << "\" cy=\"" << num(dot_y)
                    << "\" r=\"1.6\" fill=\"#c0392b\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace treegaze::svg
