#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bvpkit/windowing.hpp"

namespace bvpkit::gaf {

enum class GafKind { GASF, GADF };

/// Square trigonometric Gramian of one rescaled window.
/// GADF entries are sin(phi_a - phi_b): antisymmetric, zero diagonal.
/// GASF entries are cos(phi_a + phi_b): symmetric. All entries in [-1,1].
struct GafImage {
    std::vector<double> matrix;  ///< S x S row-major
    std::size_t size = 0;        ///< S
    GafKind kind = GafKind::GADF;
    windowing::WindowSpec source_spec;
    std::optional<std::size_t> paa_size;

    double at(std::size_t a, std::size_t b) const { return matrix[a * size + b]; }
};

/// Angular encoding phi_i = arccos(x_i) of a [-1,1]-rescaled window;
/// each angle lands in [0, pi]. Values outside [-1,1] by more than 1e-9
/// are a domain error; smaller overshoot is clamped.
std::vector<double> polar_angles(const windowing::RescaledWindow& w);

/// Difference field via the outer-product construction
/// sqrt(1-x^2)^T x - x^T sqrt(1-x^2), evaluated elementwise.
GafImage gadf(const windowing::RescaledWindow& w);

/// Summation field, cos(phi_a + phi_b).
GafImage gasf(const windowing::RescaledWindow& w);

/// Piecewise aggregate approximation: mean over S equal (possibly
/// fractional-boundary) segments. S == p is the identity.
std::vector<double> paa(std::span<const double> values, std::size_t target_size);

struct EncodeOptions {
    GafKind kind = GafKind::GADF;
    std::optional<std::size_t> paa_size = 64;  ///< applied before rescaling when < p
    /// When the caller rescaled the whole series up front, windows are
    /// already in [-1,1] and per-window rescaling is skipped.
    bool rescale_per_window = true;
};

/// Full window-to-image path: optional PAA, [-1,1] rescale, then the
/// requested field.
GafImage encode_window(std::span<const double> raw_window, const windowing::WindowSpec& spec,
                       const EncodeOptions& opts);

/// Encode every row of a window set, preserving order and labels.
std::vector<GafImage> encode_set(const windowing::WindowSet& windows, const EncodeOptions& opts);

}  // namespace bvpkit::gaf
