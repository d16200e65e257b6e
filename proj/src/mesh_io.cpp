#include "topsig/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "topsig/error.hpp"

namespace topsig {

namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

ScalarType parse_scalar_type(const std::string& name, const std::string& context)
{
    if (name == "char" || name == "int8") return ScalarType::Int8;
    if (name == "uchar" || name == "uint8") return ScalarType::UInt8;
    if (name == "short" || name == "int16") return ScalarType::Int16;
    if (name == "ushort" || name == "uint16") return ScalarType::UInt16;
    if (name == "int" || name == "int32") return ScalarType::Int32;
    if (name == "uint" || name == "uint32") return ScalarType::UInt32;
    if (name == "float" || name == "float32") return ScalarType::Float32;
    if (name == "double" || name == "float64") return ScalarType::Float64;
    throw IoError(context + ": unknown PLY scalar type '" + name + "'");
}

std::size_t scalar_size(ScalarType t)
{
    switch (t) {
    case ScalarType::Int8:
    case ScalarType::UInt8: return 1;
    case ScalarType::Int16:
    case ScalarType::UInt16: return 2;
    case ScalarType::Int32:
    case ScalarType::UInt32:
    case ScalarType::Float32: return 4;
    case ScalarType::Float64: return 8;
    }
    return 0;
}

bool is_integral(ScalarType t) { return t != ScalarType::Float32 && t != ScalarType::Float64; }

struct Property {
    std::string name;
    ScalarType type = ScalarType::Float32;
    bool is_list = false;
    ScalarType count_type = ScalarType::UInt8;
};

struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;
};

enum class Format { Ascii, BinaryLittleEndian };

// Sequential reader of PLY scalars in either encoding.
class ScalarReader {
public:
    ScalarReader(std::istream& in, Format format, std::string context)
        : in_(in), format_(format), context_(std::move(context)) {}

    double read(ScalarType type)
    {
        if (format_ == Format::Ascii)
            return read_ascii();
        char buf[8];
        const std::size_t size = scalar_size(type);
        if (!in_.read(buf, static_cast<std::streamsize>(size)))
            throw IoError(context_ + ": unexpected end of binary data");
        switch (type) {
        case ScalarType::Int8: return static_cast<double>(std::bit_cast<std::int8_t>(buf[0]));
        case ScalarType::UInt8: return static_cast<double>(static_cast<unsigned char>(buf[0]));
        case ScalarType::Int16: return load<std::int16_t>(buf);
        case ScalarType::UInt16: return load<std::uint16_t>(buf);
        case ScalarType::Int32: return load<std::int32_t>(buf);
        case ScalarType::UInt32: return load<std::uint32_t>(buf);
        case ScalarType::Float32: return load<float>(buf);
        case ScalarType::Float64: return load<double>(buf);
        }
        return 0.0;
    }

    // ASCII elements are one per line; re-synchronise at the next line.
    void end_record()
    {
        if (format_ == Format::Ascii)
            line_.clear(), pos_ = 0, have_line_ = false;
    }

private:
    template <class T>
    static double load(const char* buf)
    {
        T value;
        std::memcpy(&value, buf, sizeof(T));
        return static_cast<double>(value);
    }

    double read_ascii()
    {
        for (;;) {
            if (!have_line_) {
                if (!std::getline(in_, line_))
                    throw IoError(context_ + ": unexpected end of ASCII data");
                pos_ = 0;
                have_line_ = true;
            }
            while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
                ++pos_;
            if (pos_ >= line_.size()) {
                have_line_ = false;
                continue;
            }
            std::size_t end = pos_;
            while (end < line_.size() && !std::isspace(static_cast<unsigned char>(line_[end])))
                ++end;
            const std::string token = line_.substr(pos_, end - pos_);
            pos_ = end;
            try {
                std::size_t used = 0;
                const double value = std::stod(token, &used);
                if (used != token.size())
                    throw std::invalid_argument(token);
                return value;
            } catch (const std::exception&) {
                throw IoError(context_ + ": malformed number '" + token + "'");
            }
        }
    }

    std::istream& in_;
    Format format_;
    std::string context_;
    std::string line_;
    std::size_t pos_ = 0;
    bool have_line_ = false;
};

std::vector<std::string> split(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;)
        out.push_back(tok);
    return out;
}

int find_property(const Element& e, const std::string& name)
{
    for (std::size_t i = 0; i < e.properties.size(); ++i)
        if (e.properties[i].name == name)
            return static_cast<int>(i);
    return -1;
}

} // namespace

std::uint8_t to_color_byte(double value)
{
    const double clamped = std::clamp(value, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(clamped * 255.0 + 0.5));
}

MeshData read_ply(const std::filesystem::path& path)
{
    const std::string ctx = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + ctx);

    std::string line;
    if (!std::getline(in, line) || line.rfind("ply", 0) != 0)
        throw IoError(ctx + ": missing 'ply' magic");

    std::optional<Format> format;
    std::vector<Element> elements;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto tok = split(line);
        if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info")
            continue;
        if (tok[0] == "end_header") {
            header_done = true;
            break;
        }
        if (tok[0] == "format") {
            if (tok.size() < 2)
                throw IoError(ctx + ": malformed format line");
            if (tok[1] == "ascii")
                format = Format::Ascii;
            else if (tok[1] == "binary_little_endian")
                format = Format::BinaryLittleEndian;
            else
                throw IoError(ctx + ": unsupported PLY format '" + tok[1] + "'");
        } else if (tok[0] == "element") {
            if (tok.size() != 3)
                throw IoError(ctx + ": malformed element line '" + line + "'");
            Element e;
            e.name = tok[1];
            const auto [ptr, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), e.count);
            if (ec != std::errc{} || ptr != tok[2].data() + tok[2].size())
                throw IoError(ctx + ": bad element count '" + tok[2] + "'");
            elements.push_back(std::move(e));
        } else if (tok[0] == "property") {
            if (elements.empty())
                throw IoError(ctx + ": property before any element");
            Property p;
            if (tok.size() == 5 && tok[1] == "list") {
                p.is_list = true;
                p.count_type = parse_scalar_type(tok[2], ctx);
                p.type = parse_scalar_type(tok[3], ctx);
                p.name = tok[4];
                if (!is_integral(p.count_type))
                    throw IoError(ctx + ": list count type must be integral");
            } else if (tok.size() == 3) {
                p.type = parse_scalar_type(tok[1], ctx);
                p.name = tok[2];
            } else {
                throw IoError(ctx + ": malformed property line '" + line + "'");
            }
            elements.back().properties.push_back(p);
        } else {
            throw IoError(ctx + ": unexpected header line '" + line + "'");
        }
    }
    if (!header_done)
        throw IoError(ctx + ": header has no end_header");
    if (!format)
        throw IoError(ctx + ": header has no format line");

    MeshData mesh;
    bool have_vertices = false, have_faces = false;
    ScalarReader reader(in, *format, ctx);

    for (const Element& e : elements) {
        if (e.name == "vertex") {
            const int ix = find_property(e, "x"), iy = find_property(e, "y"), iz = find_property(e, "z");
            if (ix < 0 || iy < 0 || iz < 0)
                throw IoError(ctx + ": vertex element lacks x/y/z");
            const int ir = find_property(e, "red"), ig = find_property(e, "green"), ib = find_property(e, "blue");
            const bool has_color = ir >= 0 && ig >= 0 && ib >= 0;
            mesh.points.positions.resize(e.count);
            if (has_color)
                mesh.points.colors.emplace(e.count, Vec3::Zero());
            std::vector<double> values(e.properties.size());
            for (std::size_t v = 0; v < e.count; ++v) {
                for (std::size_t p = 0; p < e.properties.size(); ++p) {
                    const Property& prop = e.properties[p];
                    if (prop.is_list) {
                        const auto n = static_cast<std::size_t>(reader.read(prop.count_type));
                        for (std::size_t k = 0; k < n; ++k)
                            reader.read(prop.type);
                        values[p] = 0.0;
                    } else {
                        values[p] = reader.read(prop.type);
                    }
                }
                reader.end_record();
                mesh.points.positions[v] = Vec3(values[ix], values[iy], values[iz]);
                if (has_color) {
                    Vec3 c(values[ir], values[ig], values[ib]);
                    if (is_integral(e.properties[ir].type))
                        c /= 255.0;
                    (*mesh.points.colors)[v] = c;
                }
            }
            have_vertices = true;
        } else if (e.name == "face") {
            int il = find_property(e, "vertex_indices");
            if (il < 0)
                il = find_property(e, "vertex_index");
            if (il < 0 || !e.properties[il].is_list)
                throw IoError(ctx + ": face element lacks a vertex_indices list");
            mesh.triangles.resize(e.count);
            for (std::size_t f = 0; f < e.count; ++f) {
                for (std::size_t p = 0; p < e.properties.size(); ++p) {
                    const Property& prop = e.properties[p];
                    if (!prop.is_list) {
                        reader.read(prop.type);
                        continue;
                    }
                    const double count = reader.read(prop.count_type);
                    if (static_cast<int>(p) == il && count != 3.0)
                        throw IoError(ctx + ": face " + std::to_string(f) + " has " +
                                      std::to_string(static_cast<long>(count)) + " vertices (only triangles are accepted)");
                    for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
                        const double idx = reader.read(prop.type);
                        if (static_cast<int>(p) == il)
                            mesh.triangles[f][k] = static_cast<Index>(idx);
                    }
                }
                reader.end_record();
            }
            have_faces = true;
        } else {
            for (std::size_t r = 0; r < e.count; ++r) {
                for (const Property& prop : e.properties) {
                    if (prop.is_list) {
                        const auto n = static_cast<std::size_t>(reader.read(prop.count_type));
                        for (std::size_t k = 0; k < n; ++k)
                            reader.read(prop.type);
                    } else {
                        reader.read(prop.type);
                    }
                }
                reader.end_record();
            }
        }
    }
    if (!have_vertices || !have_faces)
        throw IoError(ctx + ": PLY needs both vertex and face elements");

    const auto n = static_cast<Index>(mesh.points.positions.size());
    for (std::size_t f = 0; f < mesh.triangles.size(); ++f)
        for (Index v : mesh.triangles[f])
            if (v < 0 || v >= n)
                throw IoError(ctx + ": face " + std::to_string(f) + " index " + std::to_string(v) + " out of range");
    return mesh;
}

MeshData read_obj(const std::filesystem::path& path)
{
    const std::string ctx = path.string();
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + ctx);

    MeshData mesh;
    std::vector<std::array<long, 3>> raw_faces;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tok = split(line);
        if (tok.empty() || tok[0][0] == '#')
            continue;
        if (tok[0] == "v") {
            if (tok.size() < 4)
                throw IoError(ctx + ":" + std::to_string(line_no) + ": vertex needs three coordinates");
            Vec3 p;
            for (int k = 0; k < 3; ++k) {
                try {
                    p[k] = std::stod(tok[k + 1]);
                } catch (const std::exception&) {
                    throw IoError(ctx + ":" + std::to_string(line_no) + ": malformed coordinate '" + tok[k + 1] + "'");
                }
            }
            mesh.points.positions.push_back(p);
        } else if (tok[0] == "f") {
            if (tok.size() != 4)
                throw IoError(ctx + ": face " + std::to_string(raw_faces.size()) + " has " +
                              std::to_string(tok.size() - 1) + " vertices (only triangles are accepted)");
            std::array<long, 3> f{};
            for (int k = 0; k < 3; ++k) {
                const std::string head = tok[k + 1].substr(0, tok[k + 1].find('/'));
                try {
                    f[k] = std::stol(head);
                } catch (const std::exception&) {
                    throw IoError(ctx + ":" + std::to_string(line_no) + ": malformed face index '" + tok[k + 1] + "'");
                }
            }
            raw_faces.push_back(f);
        }
    }

    const auto n = static_cast<long>(mesh.points.positions.size());
    mesh.triangles.reserve(raw_faces.size());
    for (std::size_t f = 0; f < raw_faces.size(); ++f) {
        Triangle t{};
        for (int k = 0; k < 3; ++k) {
            long idx = raw_faces[f][k];
            idx = idx > 0 ? idx - 1 : n + idx;
            if (idx < 0 || idx >= n)
                throw IoError(ctx + ": face " + std::to_string(f) + " index out of range");
            t[k] = static_cast<Index>(idx);
        }
        mesh.triangles.push_back(t);
    }
    if (mesh.triangles.empty())
        throw IoError(ctx + ": OBJ has no faces");
    return mesh;
}

MeshData read_mesh(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".ply")
        return read_ply(path);
    if (ext == ".obj")
        return read_obj(path);
    throw IoError(path.string() + ": unsupported mesh extension (expected .ply or .obj)");
}

void write_ply(const std::filesystem::path& path, const PointCloud& points, std::span<const Triangle> triangles,
               const PlyWriteOptions& options)
{
    if (options.colors && options.colors->size() != points.size())
        throw ConfigError("color count does not match the vertex count");
    if (options.face_normals && options.face_normals->size() != triangles.size())
        throw ConfigError("normal count does not match the face count");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");

    out << "ply\n" << (options.binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n");
    out << "element vertex " << points.size() << "\n"
        << "property double x\nproperty double y\nproperty double z\n";
    if (options.colors)
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "element face " << triangles.size() << "\n"
        << "property list uchar int vertex_indices\n";
    if (options.face_normals)
        out << "property float nx\nproperty float ny\nproperty float nz\n";
    out << "end_header\n";

    auto put = [&out](const auto& value) { out.write(reinterpret_cast<const char*>(&value), sizeof(value)); };

    if (options.binary) {
        for (std::size_t v = 0; v < points.size(); ++v) {
            for (int k = 0; k < 3; ++k)
                put(points.positions[v][k]);
            if (options.colors)
                for (int k = 0; k < 3; ++k)
                    put(to_color_byte((*options.colors)[v][k]));
        }
        for (std::size_t f = 0; f < triangles.size(); ++f) {
            put(std::uint8_t{3});
            for (Index idx : triangles[f])
                put(static_cast<std::int32_t>(idx));
            if (options.face_normals)
                for (int k = 0; k < 3; ++k)
                    put(static_cast<float>((*options.face_normals)[f][k]));
        }
    } else {
        out.precision(17);
        for (std::size_t v = 0; v < points.size(); ++v) {
            out << points.positions[v][0] << ' ' << points.positions[v][1] << ' ' << points.positions[v][2];
            if (options.colors)
                for (int k = 0; k < 3; ++k)
                    out << ' ' << static_cast<int>(to_color_byte((*options.colors)[v][k]));
            out << '\n';
        }
        out.precision(9);
        for (std::size_t f = 0; f < triangles.size(); ++f) {
            out << 3 << ' ' << triangles[f][0] << ' ' << triangles[f][1] << ' ' << triangles[f][2];
            if (options.face_normals)
                for (int k = 0; k < 3; ++k)
                    out << ' ' << (*options.face_normals)[f][k];
            out << '\n';
        }
    }
    if (!out)
        throw IoError("failed writing " + path.string());
}

} // namespace topsig
