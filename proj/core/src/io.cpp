#include "thinfilm/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

namespace thinfilm {

static_assert(std::endian::native == std::endian::little,
              "MFD1 writer assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'M', 'F', 'D', '1'};
}

void write_mfd1(const std::string& path, const FieldDump& dump) {
    if (dump.components.empty()) throw std::invalid_argument("write_mfd1: no components");
    for (const auto& c : dump.components)
        if (c.grid() != dump.grid) throw std::invalid_argument("write_mfd1: component grid mismatch");

    nlohmann::json header = {
        {"n", dump.grid.n()},
        {"side_length", dump.grid.side_length()},
        {"components", dump.components.size()},
        {"layout", "row-major/component-major"},
        {"dtype", "f64le"},
    };
    const std::string htext = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_mfd1: cannot open " + path);
    out.write(kMagic, 4);
    const std::uint32_t len = static_cast<std::uint32_t>(htext.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    for (const auto& c : dump.components) {
        const auto v = c.values();
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("write_mfd1: write failed for " + path);
}

void write_mfd1(const std::string& path, const ScalarField& f) {
    write_mfd1(path, FieldDump{f.grid(), {f}});
}

void write_mfd1(const std::string& path, const VectorField& v) {
    write_mfd1(path, FieldDump{v.grid(), {v.comp(0), v.comp(1), v.comp(2)}});
}

FieldDump read_mfd1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_mfd1: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_mfd1: bad magic in " + path);
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    std::string htext(len, '\0');
    in.read(htext.data(), len);
    if (!in) throw std::runtime_error("read_mfd1: truncated header in " + path);

    const auto header = nlohmann::json::parse(htext);
    const std::size_t n = header.at("n").get<std::size_t>();
    const double ell = header.at("side_length").get<double>();
    const std::size_t comps = header.at("components").get<std::size_t>();
    if (header.at("layout").get<std::string>() != "row-major/component-major")
        throw std::runtime_error("read_mfd1: unsupported layout");
    if (header.at("dtype").get<std::string>() != "f64le")
        throw std::runtime_error("read_mfd1: unsupported dtype");

    FieldDump dump{TorusGrid(n, ell), {}};
    for (std::size_t c = 0; c < comps; ++c) {
        std::vector<double> vals(n * n);
        in.read(reinterpret_cast<char*>(vals.data()),
                static_cast<std::streamsize>(vals.size() * sizeof(double)));
        if (!in) throw std::runtime_error("read_mfd1: truncated payload in " + path);
        dump.components.emplace_back(dump.grid, std::move(vals));
    }
    return dump;
}

Magnetization read_mfd1_magnetization(const std::string& path) {
    FieldDump dump = read_mfd1(path);
    if (dump.components.size() != 3)
        throw std::runtime_error("read_mfd1_magnetization: expected 3 components");
    Magnetization m(dump.grid);
    for (int c = 0; c < 3; ++c) {
        auto dst = m.comp(c).values();
        const auto src = dump.components[static_cast<std::size_t>(c)].values();
        std::copy(src.begin(), src.end(), dst.begin());
    }
    m.validate();
    return m;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
    bool row_started = false;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(std::make_unique<Impl>()) {
    impl_->out.open(path, std::ios::trunc);
    if (!impl_->out) throw std::runtime_error("CsvWriter: cannot open " + path);
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        impl_->out << (i ? "," : "") << names[i];
    impl_->out << "\n";
}

void CsvWriter::cell(double v) {
    impl_->out << (impl_->row_started ? "," : "") << format_double(v);
    impl_->row_started = true;
}

void CsvWriter::cell(long v) {
    impl_->out << (impl_->row_started ? "," : "") << v;
    impl_->row_started = true;
}

void CsvWriter::cell(std::size_t v) {
    impl_->out << (impl_->row_started ? "," : "") << v;
    impl_->row_started = true;
}

void CsvWriter::cell(const std::string& v) {
    impl_->out << (impl_->row_started ? "," : "") << v;
    impl_->row_started = true;
}

void CsvWriter::end_row() {
    impl_->out << "\n";
    impl_->row_started = false;
}

}  // namespace thinfilm
