#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

#include "topsig/complex.hpp"

namespace topsig {

/// Reads ASCII or binary little-endian PLY. The `vertex` element needs x/y/z
/// and may carry red/green/blue (8-bit scaled by 1/255, or floating point);
/// the `face` element needs a vertex index list of length 3. Other elements
/// and properties are skipped. Throws IoError.
MeshData read_ply(const std::filesystem::path& path);

/// Reads `v` and `f` records of a Wavefront OBJ (1-based or negative
/// indices, `v/vt/vn` forms). Faces with more than three vertices are rejected.
MeshData read_obj(const std::filesystem::path& path);

/// Dispatches on the file extension (.ply / .obj).
MeshData read_mesh(const std::filesystem::path& path);

struct PlyWriteOptions {
    bool binary = true;
    /// Per-vertex colors, clamped to [0,1] and stored as round-half-up 8-bit.
    std::optional<std::span<const Vec3>> colors;
    /// Per-face normals stored as float properties nx/ny/nz.
    std::optional<std::span<const Vec3>> face_normals;
};

/// Positions are written as doubles (full precision in both encodings).
void write_ply(const std::filesystem::path& path, const PointCloud& points, std::span<const Triangle> triangles,
               const PlyWriteOptions& options = {});

/// 8-bit channel for a color value: round-half-up of 255 * clamp(x, 0, 1).
std::uint8_t to_color_byte(double value);

} // namespace topsig
