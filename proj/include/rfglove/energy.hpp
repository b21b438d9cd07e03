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
#pragma once

namespace rfglove::energy {

/// Two-state duty-cycle model: the board idles at sleep_mA and draws
/// active_mA while the reader, button and audio path are busy.
struct EnergyProfile {
    double sleep_mA = 400.0;
    double active_mA = 1400.0;
    double supply_V = 5.0;
    double duty_active = 0.40;

    /// Throws std::invalid_argument unless currents and voltage are > 0 and
    /// duty_active is in [0, 1].
    void validate() const;
};

/// duty * active + (1 - duty) * sleep, in mA.
double average_current_mA(const EnergyProfile& p);

/// Power drawn at a given current, I * V, in W.
double power_W(const EnergyProfile& p, double current_mA);

/// capacity / average current, in hours. Throws for capacity <= 0.
double battery_life_h(const EnergyProfile& p, double capacity_mAh);

}  // namespace rfglove::energy
