#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "pagelayout/channel_maps.hpp"
#include "pagelayout/errors.hpp"

namespace pagelayout {

struct LossBreakdown {
  double masked_mse_asc = 0.0;
  double masked_mse_des = 0.0;
  double dice_base = 0.0;
  double dice_end = 0.0;
  double dice_block = 0.0;
  double lambda = 0.01;
  double total = 0.0;
};

namespace detail {

template <typename A, typename B>
void require_same_shape(const Eigen::ArrayBase<A>& a, const Eigen::ArrayBase<B>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

} // namespace detail

/// sum((pred - gt)^2 * mask) / sum(mask), accumulated in double. Pixels with
/// mask == 0 never touch the sum, so pred is free there. An all-zero mask
/// yields 0 and an "empty mask" diagnostic.
template <typename P, typename G, typename M>
double masked_mse(const Eigen::ArrayBase<P>& pred, const Eigen::ArrayBase<G>& gt, const Eigen::ArrayBase<M>& mask,
                  Diagnostics* diag = nullptr) {
  detail::require_same_shape(pred, gt, "masked_mse");
  detail::require_same_shape(pred, mask, "masked_mse");
  const auto m = mask.template cast<double>();
  const double weight = m.sum();
  if (weight == 0.0) {
    warn(diag, "masked_mse: empty mask");
    return 0.0;
  }
  const auto err = (pred.template cast<double>() - gt.template cast<double>()).square() * m;
  const double total = (m != 0.0).select(err, 0.0).sum();
  return total / weight;
}

/// Soft Dice loss with squared denominator terms:
/// 1 - 2 sum(pred * gt) / (sum(pred^2) + sum(gt^2)). Both maps all-zero
/// yields 0 and a diagnostic.
template <typename P, typename G>
double dice_loss(const Eigen::ArrayBase<P>& pred, const Eigen::ArrayBase<G>& gt, Diagnostics* diag = nullptr) {
  detail::require_same_shape(pred, gt, "dice_loss");
  const auto p = pred.template cast<double>();
  const auto g = gt.template cast<double>();
  const double denom = p.square().sum() + g.square().sum();
  if (denom == 0.0) {
    warn(diag, "dice_loss: both maps empty");
    return 0.0;
  }
  return 1.0 - 2.0 * (p * g).sum() / denom;
}

/// lambda * (mse_asc + mse_des) + dice_base + dice_end + dice_block, where
/// both MSE terms are masked by gt.base.
LossBreakdown total_loss(const ChannelMaps& pred, const ChannelMaps& gt, double lambda = 0.01,
                         Diagnostics* diag = nullptr);

} // namespace pagelayout
