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

namespace rfglove::stats {

double log_beta(double a, double b);

/// I_x(a, b), evaluated with the modified Lentz continued fraction on
/// whichever side of the mean converges fastest. Throws std::domain_error
/// for x outside [0, 1] or non-positive shape parameters.
double regularized_incomplete_beta(double x, double a, double b);

/// Student t with (possibly fractional) df > 0.
double student_t_cdf(double t, double df);
/// P(|T| >= |t|).
double student_t_two_tailed_p(double t, double df);

/// Fisher-Snedecor F with (possibly fractional) df1, df2 > 0.
double f_cdf(double f, double df1, double df2);
/// P(F >= f).
double f_upper_tail(double f, double df1, double df2);

/// Upper tail of the chi-square distribution with 2 degrees of freedom.
double chi2_2df_upper_tail(double x);

}  // namespace rfglove::stats
