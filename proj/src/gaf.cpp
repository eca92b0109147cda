#include "bvpkit/gaf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bvpkit/errors.hpp"

namespace bvpkit::gaf {

namespace {

constexpr double kDomainTolerance = 1e-9;

/// Validated and clamped copy of a [-1,1] window.
std::vector<double> clamped_unit_values(const windowing::RescaledWindow& w) {
    if (w.mode != windowing::ScaleMode::NegOneOne)
        throw DataError("GAF encoding requires NegOneOne rescaling");
    std::vector<double> x(w.values.begin(), w.values.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 1.0 + kDomainTolerance || x[i] < -1.0 - kDomainTolerance)
            throw DataError("polar_angles: value " + std::to_string(x[i]) + " at index " +
                            std::to_string(i) + " outside [-1,1]");
        x[i] = std::clamp(x[i], -1.0, 1.0);
    }
    return x;
}

GafImage make_image(std::size_t s, GafKind kind) {
    GafImage img;
    img.size = s;
    img.kind = kind;
    img.matrix.assign(s * s, 0.0);
    return img;
}

}  // namespace

std::vector<double> polar_angles(const windowing::RescaledWindow& w) {
    const auto x = clamped_unit_values(w);
    std::vector<double> phi(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) phi[i] = std::acos(x[i]);
    return phi;
}

GafImage gadf(const windowing::RescaledWindow& w) {
    const auto x = clamped_unit_values(w);
    const std::size_t s = x.size();

    std::vector<double> root(s);  // sqrt(1 - x^2), elementwise
    for (std::size_t i = 0; i < s; ++i) root[i] = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));

    GafImage img = make_image(s, GafKind::GADF);
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b)
            img.matrix[a * s + b] = std::clamp(root[a] * x[b] - x[a] * root[b], -1.0, 1.0);
    for (std::size_t a = 0; a < s; ++a) img.matrix[a * s + a] = 0.0;
    return img;
}

GafImage gasf(const windowing::RescaledWindow& w) {
    const auto x = clamped_unit_values(w);
    const std::size_t s = x.size();

    std::vector<double> root(s);
    for (std::size_t i = 0; i < s; ++i) root[i] = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));

    // cos(phi_a + phi_b) = x_a x_b - sqrt(1-x_a^2) sqrt(1-x_b^2)
    GafImage img = make_image(s, GafKind::GASF);
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b)
            img.matrix[a * s + b] = std::clamp(x[a] * x[b] - root[a] * root[b], -1.0, 1.0);
    return img;
}

std::vector<double> paa(std::span<const double> values, std::size_t target_size) {
    const std::size_t p = values.size();
    if (target_size == 0 || target_size > p)
        throw DataError("paa: target size " + std::to_string(target_size) +
                        " must be in [1, " + std::to_string(p) + "]");
    if (target_size == p) return {values.begin(), values.end()};

    // Each output cell averages the input over [i*p/S, (i+1)*p/S); input
    // samples straddling a boundary contribute fractional weight.
    std::vector<double> out(target_size, 0.0);
    const double seg = static_cast<double>(p) / static_cast<double>(target_size);
    for (std::size_t i = 0; i < target_size; ++i) {
        const double lo = seg * static_cast<double>(i);
        const double hi = seg * static_cast<double>(i + 1);
        double acc = 0.0;
        std::size_t first = static_cast<std::size_t>(lo);
        for (std::size_t k = first; k < p && static_cast<double>(k) < hi; ++k) {
            const double overlap =
                std::min(hi, static_cast<double>(k + 1)) - std::max(lo, static_cast<double>(k));
            if (overlap > 0.0) acc += overlap * values[k];
        }
        out[i] = acc / seg;
    }
    return out;
}

GafImage encode_window(std::span<const double> raw_window, const windowing::WindowSpec& spec,
                       const EncodeOptions& opts) {
    std::vector<double> stage(raw_window.begin(), raw_window.end());
    std::optional<std::size_t> applied_paa;
    if (opts.paa_size && *opts.paa_size < stage.size()) {
        stage = paa(stage, *opts.paa_size);
        applied_paa = *opts.paa_size;
    }

    windowing::RescaledWindow rw;
    if (opts.rescale_per_window) {
        rw = windowing::rescale(stage, windowing::ScaleMode::NegOneOne);
    } else {
        rw.values = std::move(stage);
        rw.mode = windowing::ScaleMode::NegOneOne;
    }

    GafImage img = opts.kind == GafKind::GADF ? gadf(rw) : gasf(rw);
    img.source_spec = spec;
    img.paa_size = applied_paa;
    return img;
}

std::vector<GafImage> encode_set(const windowing::WindowSet& windows, const EncodeOptions& opts) {
    std::vector<GafImage> images;
    images.reserve(windows.count());
    for (std::size_t i = 0; i < windows.count(); ++i)
        images.push_back(encode_window(windows.row(i), windows.spec, opts));
    return images;
}

}  // namespace bvpkit::gaf
