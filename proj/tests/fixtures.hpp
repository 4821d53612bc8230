#pragma once

#include <cmath>

#include "ia/netmodel.hpp"

namespace fixtures {

// The 4-link 8x8 benchmark network used throughout (B = 20, sigma2 = 1).
inline ia::NetworkScenario table1(double snr_db) {
  ia::NetworkScenario net;
  net.links = 4;
  net.tx_antennas = 8;
  net.rx_antennas = 8;
  net.noise_power = 1.0;
  net.power = std::pow(10.0, snr_db / 10.0);
  net.feedback_budget = 20;
  net.path_loss = {{1.00, 0.50, 0.10, 0.01},
                   {0.55, 1.00, 0.45, 0.10},
                   {0.10, 0.45, 1.00, 0.55},
                   {0.01, 0.10, 0.50, 1.00}};
  return net;
}

// Desk-scale 3-link 4x4 network with the same asymmetric flavor (B = 12).
inline ia::NetworkScenario k3_asym(double snr_db) {
  ia::NetworkScenario net;
  net.links = 3;
  net.tx_antennas = 4;
  net.rx_antennas = 4;
  net.noise_power = 1.0;
  net.power = std::pow(10.0, snr_db / 10.0);
  net.feedback_budget = 12;
  net.path_loss = {{1.00, 0.50, 0.10}, {0.55, 1.00, 0.45}, {0.10, 0.45, 1.00}};
  return net;
}

}  // namespace fixtures
