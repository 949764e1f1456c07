#include "photostat/csv_io.hpp"

#include "photostat/errors.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

namespace photostat {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open file: " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream iss(line);
    while (std::getline(iss, cell, ','))
        cells.push_back(cell);
    return cells;
}

double cell_double(const std::string& cell, const std::string& path) {
    try {
        return std::stod(cell);
    } catch (const std::exception&) {
        throw io_error("bad numeric cell '" + cell + "' in " + path);
    }
}

} // namespace

void write_stats_csv(const StatisticalImages& images, const std::string& path) {
    auto out = open_out(path);
    out << "index,mean,variance,z\n";
    for (std::size_t k = 0; k < images.mean.size(); ++k)
        out << k << ',' << fmt_double(images.mean[k]) << ',' << fmt_double(images.variance[k])
            << ',' << fmt_double(images.z[k]) << '\n';
    if (!out)
        throw io_error("error writing " + path);
}

StatsTable read_stats_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,mean,variance,z", 0) != 0)
        throw io_error("not a stats table: " + path);
    StatsTable t;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != 4)
            throw io_error("malformed stats row in " + path);
        t.mean.push_back(cell_double(cells[1], path));
        t.variance.push_back(cell_double(cells[2], path));
        t.z.push_back(cell_double(cells[3], path));
    }
    if (t.mean.empty())
        throw io_error("empty stats table: " + path);
    return t;
}

void write_matrix_csv(const CovarianceMatrix& matrix, const std::string& path) {
    auto out = open_out(path);
    out << "index";
    for (std::size_t l = 0; l < matrix.size(); ++l)
        out << ",c" << l;
    out << '\n';
    for (int k : matrix.rows()) {
        out << k;
        const auto row = matrix.row(k);
        for (double v : row)
            out << ',' << fmt_double(v);
        out << '\n';
    }
    if (!out)
        throw io_error("error writing " + path);
}

CovarianceMatrix read_matrix_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,c0", 0) != 0)
        throw io_error("not a covariance table: " + path);
    const std::size_t k_count = split_csv(line).size() - 1;

    std::vector<int> rows;
    std::vector<std::vector<double>> values;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != k_count + 1)
            throw io_error("malformed covariance row in " + path);
        rows.push_back(static_cast<int>(cell_double(cells[0], path)));
        std::vector<double> row(k_count);
        for (std::size_t l = 0; l < k_count; ++l)
            row[l] = cell_double(cells[l + 1], path);
        values.push_back(std::move(row));
    }
    if (rows.empty())
        throw io_error("empty covariance table: " + path);

    // rows() must be sorted for lookup; sort both together
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a] < rows[b]; });

    std::vector<int> sorted_rows;
    sorted_rows.reserve(rows.size());
    for (std::size_t i : order)
        sorted_rows.push_back(rows[i]);
    CovarianceMatrix m(sorted_rows, k_count);
    for (std::size_t i : order)
        for (std::size_t l = 0; l < k_count; ++l)
            m.set(rows[i], static_cast<int>(l), values[i][l]);
    return m;
}

void write_series_csv(const std::vector<double>& values, const std::string& name,
                      const std::string& path) {
    auto out = open_out(path);
    out << "index," << name << '\n';
    for (std::size_t k = 0; k < values.size(); ++k)
        out << k << ',' << fmt_double(values[k]) << '\n';
    if (!out)
        throw io_error("error writing " + path);
}

std::vector<double> read_series_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,", 0) != 0)
        throw io_error("not a series table: " + path);
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != 2)
            throw io_error("malformed series row in " + path);
        values.push_back(cell_double(cells[1], path));
    }
    return values;
}

namespace {

constexpr char kStackMagic[4] = {'P', 'C', 'S', '1'};

void put_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    std::fwrite(b, 1, 4, f);
}

void put_u64(std::FILE* f, std::uint64_t v) {
    put_u32(f, static_cast<std::uint32_t>(v));
    put_u32(f, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t get_u32(const unsigned char* b) {
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

} // namespace

StackWriter::StackWriter(const std::string& path, std::uint32_t pixel_count)
    : path_(path), pixel_count_(pixel_count) {
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_)
        throw io_error("cannot write stack file: " + path);
    std::fwrite(kStackMagic, 1, 4, file_);
    put_u32(file_, pixel_count_);
    put_u64(file_, 0); // image count, patched on close
}

StackWriter::~StackWriter() {
    if (file_) {
        try {
            close();
        } catch (...) {
            // destructor must not throw; close() explicitly to see errors
        }
    }
}

void StackWriter::append(const SampleImage& image) {
    if (!file_)
        throw io_error("stack file already closed: " + path_);
    if (image.size() != pixel_count_)
        throw std::invalid_argument("StackWriter: image length mismatch");
    for (std::uint32_t c : image)
        put_u32(file_, c);
    if (std::ferror(file_))
        throw io_error("error writing stack file: " + path_);
    ++written_;
}

void StackWriter::close() {
    if (!file_)
        return;
    std::fseek(file_, 8, SEEK_SET);
    put_u64(file_, written_);
    const bool bad = std::ferror(file_) != 0;
    std::fclose(file_);
    file_ = nullptr;
    if (bad)
        throw io_error("error finalizing stack file: " + path_);
}

std::vector<SampleImage> read_stack(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f)
        throw io_error("cannot open stack file: " + path);
    unsigned char header[16];
    if (std::fread(header, 1, sizeof header, f) != sizeof header ||
        std::memcmp(header, kStackMagic, 4) != 0) {
        std::fclose(f);
        throw io_error("not a stack file: " + path);
    }
    const std::uint32_t k_count = get_u32(header + 4);
    const std::uint64_t n = std::uint64_t(get_u32(header + 8)) |
                            std::uint64_t(get_u32(header + 12)) << 32;
    std::vector<SampleImage> images;
    images.reserve(n);
    std::vector<unsigned char> buf(std::size_t(k_count) * 4);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (std::fread(buf.data(), 1, buf.size(), f) != buf.size()) {
            std::fclose(f);
            throw io_error("truncated stack file: " + path);
        }
        SampleImage img(k_count);
        for (std::uint32_t k = 0; k < k_count; ++k)
            img[k] = get_u32(buf.data() + std::size_t(k) * 4);
        images.push_back(std::move(img));
    }
    std::fclose(f);
    return images;
}

} // namespace photostat
