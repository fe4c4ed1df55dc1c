#include "wuglab/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace wuglab::numerics {

namespace {

constexpr char kMagic[4] = {'W', 'L', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kEndianMarker = 0x01020304u;

template <typename T>
void write_pod(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("checkpoint: truncated file");
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const Tensor*>>& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint: " + path);

    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, kEndianMarker);
    write_pod(out, static_cast<std::uint32_t>(entries.size()));
    for (const auto& [name, tensor] : entries) {
        write_pod(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_pod(out, static_cast<std::uint32_t>(tensor->rank()));
        for (std::size_t d : tensor->shape()) write_pod(out, static_cast<std::uint64_t>(d));
    }
    for (const auto& [name, tensor] : entries) {
        (void)name;
        out.write(reinterpret_cast<const char*>(tensor->data()),
                  static_cast<std::streamsize>(tensor->size() * sizeof(double)));
    }
    if (!out) throw DataError("short write on checkpoint: " + path);
}

std::vector<std::pair<std::string, Tensor>> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("not a checkpoint file: " + path);
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(version));
    const auto endian = read_pod<std::uint32_t>(in);
    if (endian != kEndianMarker)
        throw DataError("checkpoint endianness does not match this platform: " + path);

    const auto count = read_pod<std::uint32_t>(in);
    std::vector<std::pair<std::string, std::vector<std::size_t>>> headers;
    headers.reserve(count);
    for (std::uint32_t e = 0; e < count; ++e) {
        const auto name_len = read_pod<std::uint32_t>(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const auto ndim = read_pod<std::uint32_t>(in);
        std::vector<std::size_t> shape(ndim);
        for (auto& d : shape) d = static_cast<std::size_t>(read_pod<std::uint64_t>(in));
        if (!in) throw DataError("checkpoint: truncated header");
        headers.emplace_back(std::move(name), std::move(shape));
    }

    std::vector<std::pair<std::string, Tensor>> out;
    out.reserve(count);
    for (auto& [name, shape] : headers) {
        Tensor t(shape);
        in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
        if (!in) throw DataError("checkpoint: truncated payload for " + name);
        out.emplace_back(std::move(name), std::move(t));
    }
    return out;
}

void save_metadata(const std::string& path, const std::map<std::string, std::string>& kv) {
    std::string text;
    for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
    write_file(path, text);
}

std::map<std::string, std::string> load_metadata(const std::string& path) {
    std::map<std::string, std::string> kv;
    for (const auto& raw : split(read_file(path), '\n')) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("metadata line without '=': " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace wuglab::numerics
