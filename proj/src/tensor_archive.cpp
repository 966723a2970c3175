#include "newslens/tensor_archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "newslens/common.hpp"

static_assert(std::endian::native == std::endian::little,
              "tensor archives are little-endian; big-endian hosts need byte swaps");

namespace newslens {

TensorMap read_tensor_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open tensor archive: " + path);

    std::uint8_t len_bytes[8];
    if (!in.read(reinterpret_cast<char*>(len_bytes), 8))
        throw FormatError("tensor archive truncated before manifest length: " + path);
    std::uint64_t manifest_len = 0;
    for (int i = 7; i >= 0; --i) manifest_len = (manifest_len << 8) | len_bytes[i];

    std::string manifest_text(manifest_len, '\0');
    if (!in.read(manifest_text.data(),
                 static_cast<std::streamsize>(manifest_len)))
        throw FormatError("tensor archive truncated inside manifest: " + path);

    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(manifest_text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("tensor archive manifest is not valid JSON: " +
                          std::string(e.what()));
    }
    if (!manifest.is_object())
        throw FormatError("tensor archive manifest must be a JSON object: " + path);

    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    TensorMap tensors;
    for (const auto& [name, entry] : manifest.items()) {
        std::string dtype;
        std::vector<std::int64_t> shape;
        std::uint64_t offset = 0, nbytes = 0;
        try {
            dtype = entry.at("dtype").get<std::string>();
            shape = entry.at("shape").get<std::vector<std::int64_t>>();
            offset = entry.at("offset").get<std::uint64_t>();
            nbytes = entry.at("nbytes").get<std::uint64_t>();
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("tensor '" + name + "': malformed manifest entry: " +
                              std::string(e.what()));
        }
        if (dtype != "f32")
            throw FormatError("tensor '" + name + "': unsupported dtype \"" +
                              dtype + "\"");
        Tensor t;
        t.shape = shape;
        for (auto d : shape)
            if (d < 0)
                throw FormatError("tensor '" + name + "': negative dimension");
        const auto expect = static_cast<std::uint64_t>(t.numel()) * 4;
        if (nbytes != expect)
            throw FormatError("tensor '" + name + "': nbytes " +
                              std::to_string(nbytes) + " does not match shape (" +
                              std::to_string(expect) + " expected)");
        if (offset + nbytes > data.size())
            throw FormatError("tensor '" + name + "': data range exceeds archive");
        t.data.resize(static_cast<std::size_t>(t.numel()));
        std::memcpy(t.data.data(), data.data() + offset, nbytes);
        tensors.emplace(name, std::move(t));
    }
    return tensors;
}

void write_tensor_archive(const std::string& path, const TensorMap& tensors) {
    nlohmann::json manifest = nlohmann::json::object();
    std::uint64_t offset = 0;
    for (const auto& [name, t] : tensors) {
        const auto nbytes = static_cast<std::uint64_t>(t.numel()) * 4;
        if (t.data.size() != static_cast<std::size_t>(t.numel()))
            throw std::invalid_argument("tensor '" + name +
                                        "': data size does not match shape");
        manifest[name] = {{"dtype", "f32"},
                          {"shape", t.shape},
                          {"offset", offset},
                          {"nbytes", nbytes}};
        offset += nbytes;
    }
    const std::string manifest_text = manifest.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write tensor archive: " + path);
    const auto len = static_cast<std::uint64_t>(manifest_text.size());
    std::uint8_t len_bytes[8];
    for (int i = 0; i < 8; ++i)
        len_bytes[i] = static_cast<std::uint8_t>((len >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(len_bytes), 8);
    out.write(manifest_text.data(),
              static_cast<std::streamsize>(manifest_text.size()));
    for (const auto& [name, t] : tensors) {
        (void)name;
        out.write(reinterpret_cast<const char*>(t.data.data()),
                  static_cast<std::streamsize>(t.data.size() * 4));
    }
    if (!out) throw IoError("error while writing tensor archive: " + path);
}

}  // namespace newslens
