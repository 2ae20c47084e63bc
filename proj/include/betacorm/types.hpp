#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace betacorm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Grouped binary data is dense and small (desk scale); one byte per cell.
using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Provenance stamped into every artifact file so a run can be reproduced
// from the file alone.
struct ArtifactMeta {
  std::uint64_t seed = 0;
  std::string config_hash;
};

}  // namespace betacorm
