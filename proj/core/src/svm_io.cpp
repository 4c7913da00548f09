#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "potvid/errors.hpp"
#include "potvid/svm.hpp"

namespace potvid {
namespace {

constexpr char kMagic[4] = {'P', 'S', 'V', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxCount = 1u << 24;

class Writer {
public:
    explicit Writer(const std::filesystem::path& path)
        : out_(path, std::ios::binary | std::ios::trunc), path_(path.string()) {
        if (!out_) throw FormatError("cannot open " + path_ + " for writing");
    }
    void bytes(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
    void u32(std::uint32_t v) {
        char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                     static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
        bytes(b, 4);
    }
    void f32(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(bits >> (8 * i));
        bytes(b, 8);
    }
    void finish() {
        if (!out_) throw FormatError("write failed for " + path_);
    }

private:
    std::ofstream out_;
    std::string path_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path)
        : in_(path, std::ios::binary), path_(path.string()) {
        if (!in_) throw FormatError("cannot open " + path_);
    }
    void bytes(char* dst, std::size_t n, const std::string& what) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw FormatError("truncated " + what + " at offset " +
                              std::to_string(offset_ + static_cast<std::size_t>(in_.gcount())) +
                              " in " + path_);
        offset_ += n;
    }
    std::uint32_t u32(const std::string& what) {
        char b[4];
        bytes(b, 4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
        return v;
    }
    float f32(const std::string& what) {
        const std::uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    double f64(const std::string& what) {
        char b[8];
        bytes(b, 8, what);
        std::uint64_t bits = 0;
        for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<std::uint8_t>(b[i]);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    void expect_eof() {
        if (in_.peek() != std::char_traits<char>::eof())
            throw FormatError("trailing bytes after offset " + std::to_string(offset_) +
                              " in " + path_);
    }
    std::size_t offset() const { return offset_; }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t offset_ = 0;
};

}  // namespace

void save_model(const SvmModel& model, const std::filesystem::path& path) {
    if (model.classes.size() < 2 || model.binaries.size() != model.classes.size())
        throw InputError("model must carry one binary machine per class, two or more");
    if (model.dim == 0) throw InputError("model dimension is zero");

    Writer w(path);
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    w.u32(model.kernel.kind == KernelKind::Linear ? 0 : 1);
    w.f64(model.kernel.kind == KernelKind::Chi2 ? model.kernel.gamma.value() : 0.0);
    w.u32(static_cast<std::uint32_t>(model.dim));
    w.u32(static_cast<std::uint32_t>(model.classes.size()));
    for (const auto& name : model.classes) {
        w.u32(static_cast<std::uint32_t>(name.size()));
        w.bytes(name.data(), name.size());
    }
    w.u32(static_cast<std::uint32_t>(model.vectors.size()));
    for (const auto& bin : model.binaries) {
        w.u32(static_cast<std::uint32_t>(bin.sv_indices.size()));
        for (std::size_t k = 0; k < bin.sv_indices.size(); ++k) {
            w.u32(bin.sv_indices[k]);
            w.f64(bin.coeffs[k]);
        }
        w.f64(bin.bias);
    }
    for (const auto& vec : model.vectors) {
        if (vec.size() != model.dim)
            throw InputError("stored vector size does not match model dimension");
        for (double v : vec) w.f32(static_cast<float>(v));
    }
    w.finish();
}

SvmModel load_model(const std::filesystem::path& path) {
    Reader r(path);
    char magic[4];
    r.bytes(magic, 4, "header");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("bad magic at offset 0 in " + path.string() +
                          " (expected PSVM)");
    const std::uint32_t version = r.u32("header");
    if (version != kVersion)
        throw FormatError("unsupported PSVM version " + std::to_string(version));

    SvmModel model;
    const std::uint32_t kind = r.u32("header");
    if (kind > 1) throw FormatError("unknown kernel kind " + std::to_string(kind));
    model.kernel.kind = kind == 0 ? KernelKind::Linear : KernelKind::Chi2;
    const double gamma = r.f64("header");
    if (model.kernel.kind == KernelKind::Chi2) {
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw FormatError("chi2 model carries invalid gamma");
        model.kernel.gamma = gamma;
    }

    model.dim = r.u32("header");
    if (model.dim == 0) throw FormatError("model dimension is zero");
    const std::uint32_t n_classes = r.u32("header");
    if (n_classes < 2 || n_classes > kMaxCount)
        throw FormatError("class count " + std::to_string(n_classes) + " out of range");
    for (std::uint32_t c = 0; c < n_classes; ++c) {
        const std::uint32_t len = r.u32("label table");
        if (len > kMaxCount) throw FormatError("label length out of range");
        std::string name(len, '\0');
        r.bytes(name.data(), len, "label table");
        model.classes.push_back(std::move(name));
    }

    const std::uint32_t n_vectors = r.u32("vector count");
    if (n_vectors > kMaxCount)
        throw FormatError("vector count " + std::to_string(n_vectors) + " out of range");
    for (std::uint32_t c = 0; c < n_classes; ++c) {
        BinaryModel bin;
        const std::uint32_t n_sv = r.u32("coefficient block");
        if (n_sv > n_vectors)
            throw FormatError("class " + std::to_string(c) + " claims " +
                              std::to_string(n_sv) + " support vectors of " +
                              std::to_string(n_vectors) + " stored");
        for (std::uint32_t k = 0; k < n_sv; ++k) {
            const std::uint32_t index = r.u32("coefficient block");
            if (index >= n_vectors)
                throw FormatError("support vector index " + std::to_string(index) +
                                  " out of range at offset " + std::to_string(r.offset() - 4));
            const double coeff = r.f64("coefficient block");
            if (!std::isfinite(coeff))
                throw FormatError("non-finite coefficient in class " + std::to_string(c));
            bin.sv_indices.push_back(index);
            bin.coeffs.push_back(coeff);
        }
        bin.bias = r.f64("coefficient block");
        if (!std::isfinite(bin.bias))
            throw FormatError("non-finite bias in class " + std::to_string(c));
        model.binaries.push_back(std::move(bin));
    }

    model.vectors.reserve(n_vectors);
    for (std::uint32_t i = 0; i < n_vectors; ++i) {
        std::vector<double> vec(model.dim);
        for (std::size_t j = 0; j < model.dim; ++j) {
            const float v = r.f32("vectors");
            if (!std::isfinite(v))
                throw FormatError("non-finite support vector value in row " +
                                  std::to_string(i));
            vec[j] = v;
        }
        model.vectors.push_back(std::move(vec));
    }
    r.expect_eof();
    return model;
}

}  // namespace potvid
