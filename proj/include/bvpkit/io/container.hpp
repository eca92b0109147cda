#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bvpkit/condition.hpp"
#include "bvpkit/gaf.hpp"
#include "bvpkit/nn/model.hpp"
#include "bvpkit/windowing.hpp"

namespace bvpkit::io {

/// Versioned binary container shared by window archives, GAF archives
/// and model weights:
///
///   "BVPK" | u16 version | u16 kind | u64 header_len | header JSON
///   | u64 tensor_count | per tensor: u64 rank, u64 dims..., f64 data
///
/// All integers and doubles little-endian. The JSON header echoes the
/// producing configuration.
enum class ContainerKind : std::uint16_t {
    Windows = 1,
    GafImages = 2,
    ModelWeights = 3,
};

constexpr std::uint16_t kContainerVersion = 1;

struct GafArchive {
    std::vector<gaf::GafImage> images;
    std::vector<Condition> labels;
    std::vector<std::string> participants;
};

void save_windows(std::ostream& out, const windowing::WindowSet& windows);
windowing::WindowSet load_windows(std::istream& in);

void save_gaf(std::ostream& out, const GafArchive& archive);
GafArchive load_gaf(std::istream& in);

/// Weights are written in parameter declaration order (conv/dense
/// weight then bias, front to back), shapes included.
void save_model(std::ostream& out, nn::Model& model);

/// Rebuilds the model from its config echo and restores the weights.
nn::Model load_model(std::istream& in);

// file-path conveniences
void save_windows_file(const std::string& path, const windowing::WindowSet& windows);
windowing::WindowSet load_windows_file(const std::string& path);
void save_gaf_file(const std::string& path, const GafArchive& archive);
GafArchive load_gaf_file(const std::string& path);
void save_model_file(const std::string& path, nn::Model& model);
nn::Model load_model_file(const std::string& path);

}  // namespace bvpkit::io
