#pragma once

namespace wmsn {

// First-order radio model. Electronics cost per bit plus a d^2 amplifier term
// on the transmit side.
struct EnergyModelParams {
  double e_elec = 5e-6;    // J/bit
  double eps_amp = 1e-9;   // J/bit/m^2
  double packet_bits = 1000.0;  // nominal payload used for neighbor scoring
};

// Energy to transmit `bits` over `dist` meters. bits and dist must be >= 0.
double tx_energy(const EnergyModelParams& p, double bits, double dist);

// Energy to receive `bits`. bits must be >= 0.
double rx_energy(const EnergyModelParams& p, double bits);

// Residual-energy objective for a candidate next hop at `dist` meters with
// reported residual `neighbor_energy`. Uses p.packet_bits. May be negative
// (the neighbor cannot afford the relay).
double neighbor_score(const EnergyModelParams& p, double neighbor_energy,
                      double dist);

// Per-node battery. A node with residual == 0 is dead: it neither sends nor
// receives.
struct EnergyStore {
  double initial = 1.0;   // J
  double residual = 1.0;  // J
  bool alive() const { return residual > 0.0; }
};

// Consume `amount` joules, clamping at zero. Callers that care about the
// difference between the requested and applied amount (a clamping event)
// compare residual to amount beforehand.
EnergyStore debit(EnergyStore s, double amount);

}  // namespace wmsn
