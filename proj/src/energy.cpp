#include "wmsn/energy.hpp"

#include <algorithm>
#include <stdexcept>

namespace wmsn {

double tx_energy(const EnergyModelParams& p, double bits, double dist) {
  if (bits < 0.0) throw std::invalid_argument("tx_energy: negative bits");
  if (dist < 0.0) throw std::invalid_argument("tx_energy: negative distance");
  return bits * (p.e_elec + p.eps_amp * dist * dist);
}

double rx_energy(const EnergyModelParams& p, double bits) {
  if (bits < 0.0) throw std::invalid_argument("rx_energy: negative bits");
  return bits * p.e_elec;
}

double neighbor_score(const EnergyModelParams& p, double neighbor_energy,
                      double dist) {
  return neighbor_energy - tx_energy(p, p.packet_bits, dist) -
         rx_energy(p, p.packet_bits);
}

EnergyStore debit(EnergyStore s, double amount) {
  if (amount < 0.0) throw std::invalid_argument("debit: negative amount");
  s.residual = std::max(0.0, s.residual - amount);
  return s;
}

}  // namespace wmsn
