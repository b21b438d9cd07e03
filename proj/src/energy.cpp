/* Copyright 2026 The rfglove Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "rfglove/energy.hpp"

#include <stdexcept>

namespace rfglove::energy {

void EnergyProfile::validate() const {
    if (!(sleep_mA > 0.0 && active_mA > 0.0 && supply_V > 0.0)) {
        throw std::invalid_argument("currents and supply voltage must be > 0");
    }
    if (!(duty_active >= 0.0 && duty_active <= 1.0)) {
        throw std::invalid_argument("duty_active must be in [0, 1]");
    }
}

double average_current_mA(const EnergyProfile& p) {
    p.validate();
    return p.duty_active * p.active_mA + (1.0 - p.duty_active) * p.sleep_mA;
}

double power_W(const EnergyProfile& p, double current_mA) { return current_mA / 1000.0 * p.supply_V; }

double battery_life_h(const EnergyProfile& p, double capacity_mAh) {
    if (!(capacity_mAh > 0.0)) throw std::invalid_argument("capacity must be > 0");
    return capacity_mAh / average_current_mA(p);
}

}  // namespace rfglove::energy
