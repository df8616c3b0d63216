#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nfbm/errors.hpp"
#include "nfbm/kernels.hpp"

namespace nfbm {
namespace {

constexpr char kMagic[8] = {'N', 'F', 'B', 'M', 'K', 'M', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::ios_base::failure("kernel cache: truncated file");
    return v;
}

}  // namespace

void save_kernel_matrix(const std::string& path, const KernelMatrix& K) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::ios_base::failure("kernel cache: cannot open " + path);
    os.write(kMagic, sizeof kMagic);
    put(os, kVersion);
    put(os, double(K.order().n));
    put(os, K.order().H);
    put(os, K.grid().T);
    put(os, double(K.grid().m));
    const auto& D = K.dense();
    for (int i = 0; i < K.grid().m; ++i)
        for (int j = 0; j <= i; ++j) put(os, D(i, j));
    if (!os) throw std::ios_base::failure("kernel cache: write failed for " + path);
}

KernelMatrix load_kernel_matrix(const std::string& path, const HurstOrder& ho, const Grid& grid) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::ios_base::failure("kernel cache: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::ios_base::failure("kernel cache: bad magic in " + path);
    if (get<std::uint32_t>(is) != kVersion) throw std::ios_base::failure("kernel cache: unsupported version");
    const double n = get<double>(is), H = get<double>(is), T = get<double>(is), m = get<double>(is);
    if (n != ho.n || H != ho.H || T != grid.T || m != grid.m)
        throw DomainError("kernel cache: file was written for different (n, H, T, m)");
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(grid.m, grid.m);
    for (int i = 0; i < grid.m; ++i)
        for (int j = 0; j <= i; ++j) D(i, j) = get<double>(is);
    return KernelMatrix::from_dense(ho, grid, D);
}

}  // namespace nfbm
