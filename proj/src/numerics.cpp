#include "agpotts/numerics.hpp"

#include <array>

namespace agpotts {

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9E3779B97F4A7C15ULL;
  value = (value ^ (value >> 30)) * 0xBF58476D1CE4E5B9ULL;
  value = (value ^ (value >> 27)) * 0x94D049BB133111EBULL;
  return value ^ (value >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t master_seed, std::uint64_t stream_id) {
  const std::uint64_t a = mix_seed(master_seed);
  const std::uint64_t b = mix_seed(a ^ mix_seed(stream_id + 0x632BE59BD9B4E019ULL));
  std::array<std::uint32_t, 8> words{};
  std::uint64_t s = b;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    s = mix_seed(s);
    words[i] = static_cast<std::uint32_t>(s);
    words[i + 1] = static_cast<std::uint32_t>(s >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(make_engine(master_seed, stream_id)) {}

RngStream RngStream::child(std::uint64_t sub_id) const {
  return RngStream(mix_seed(master_seed_ ^ mix_seed(stream_id_)), sub_id);
}

Eigen::VectorXd standard_normal_vec(RngStream& stream, Eigen::Index n) {
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = stream.normal();
  return out;
}

Eigen::MatrixXd standard_normal_matrix(RngStream& stream, Eigen::Index rows,
                                       Eigen::Index cols) {
  Eigen::MatrixXd out(rows, cols);
  double* data = out.data();
  for (Eigen::Index i = 0; i < rows * cols; ++i) data[i] = stream.normal();
  return out;
}

}  // namespace agpotts
