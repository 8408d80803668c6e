#include "pagelayout/losses.hpp"

namespace pagelayout {

LossBreakdown total_loss(const ChannelMaps& pred, const ChannelMaps& gt, double lambda, Diagnostics* diag) {
  if (pred.size() != gt.size()) throw std::invalid_argument("total_loss: shape mismatch");
  LossBreakdown out;
  out.lambda = lambda;
  out.masked_mse_asc = masked_mse(pred.asc, gt.asc, gt.base, diag);
  out.masked_mse_des = masked_mse(pred.des, gt.des, gt.base, diag);
  out.dice_base = dice_loss(pred.base, gt.base, diag);
  out.dice_end = dice_loss(pred.end, gt.end, diag);
  out.dice_block = dice_loss(pred.block, gt.block, diag);
  out.total = lambda * (out.masked_mse_asc + out.masked_mse_des) + out.dice_base + out.dice_end + out.dice_block;
  return out;
}

} // namespace pagelayout
