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
#include <stdexcept>

#include "doctest.h"
#include "rfglove/energy.hpp"

using namespace rfglove::energy;

TEST_SUITE("energy") {

TEST_CASE("defaults") {
    const EnergyProfile p;
    CHECK(average_current_mA(p) == doctest::Approx(800.0));
    CHECK(battery_life_h(p, 2000.0) == doctest::Approx(2.5));
    CHECK(power_W(p, p.sleep_mA) == doctest::Approx(2.0));
    CHECK(power_W(p, p.active_mA) == doctest::Approx(7.0));
}

TEST_CASE("duty boundaries") {
    EnergyProfile p;
    p.duty_active = 0.0;
    CHECK(average_current_mA(p) == doctest::Approx(p.sleep_mA));
    p.duty_active = 1.0;
    CHECK(average_current_mA(p) == doctest::Approx(p.active_mA));
    p.duty_active = 0.3;
    CHECK(average_current_mA(p) == doctest::Approx(700.0));
    CHECK(battery_life_h(p, 2000.0) == doctest::Approx(2000.0 / 700.0));
}

TEST_CASE("life falls as duty rises and scales with capacity") {
    EnergyProfile p;
    double previous = 1e300;
    for (int i = 0; i <= 100; ++i) {
        p.duty_active = i / 100.0;
        const double life = battery_life_h(p, 2000.0);
        CHECK(life < previous);
        previous = life;
        CHECK(average_current_mA(p) >= p.sleep_mA - 1e-9);
        CHECK(average_current_mA(p) <= p.active_mA + 1e-9);
        CHECK(battery_life_h(p, 4000.0) == doctest::Approx(2.0 * life));
    }
}

TEST_CASE("band for duty 0.30 to 0.40") {
    EnergyProfile p;
    for (int i = 30; i <= 40; ++i) {
        p.duty_active = i / 100.0;
        const double life = battery_life_h(p, 2000.0);
        CHECK(life >= 2.5 - 1e-12);
        CHECK(life <= 3.0);
    }
}

TEST_CASE("validation") {
    EnergyProfile p;
    p.duty_active = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.sleep_mA = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.supply_V = -5.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(battery_life_h(EnergyProfile{}, 0.0), std::invalid_argument);
    CHECK_NOTHROW(EnergyProfile{}.validate());
}

}
