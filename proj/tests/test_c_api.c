// Copyright 2026 The atc-opt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Exercises the C interface from C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "atc/atc.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

int main(void) {
  atc_chain* chain = NULL;
  atc_decomposition* decomp = NULL;
  atc_result* result = NULL;

  EXPECT(atc_chain_create(100, 1.0, -0.25, "zero", &chain) == ATC_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(atc_last_error()) > 0);
  EXPECT(atc_chain_create(100, 1.0, -1.0 / 6.0, "bogus", &chain) == ATC_ERR_INVALID_ARGUMENT);

  EXPECT(atc_chain_create(100, 1.0, -1.0 / 6.0, "sine:1", &chain) == ATC_OK);
  EXPECT(atc_decomposition_create(chain, 18, 20, &decomp) == ATC_ERR_INVALID_ARGUMENT);
  EXPECT(atc_decomposition_create(chain, 10, 20, &decomp) == ATC_OK);

  int ok = 0;
  char* warnings = NULL;
  EXPECT(atc_check_assumptions(decomp, 2.0, 2.0, &ok, &warnings) == ATC_OK);
  EXPECT(ok == 1);
  atc_string_free(warnings);

  EXPECT(atc_solve(chain, decomp, &result) == ATC_OK);
  double controls[3];
  EXPECT(atc_result_controls(result, controls) == ATC_OK);
  double mismatch = -1.0;
  EXPECT(atc_result_mismatch(result, &mismatch) == ATC_OK);
  EXPECT(mismatch >= 0.0);

  int lo = -1, hi = -1;
  EXPECT(atc_result_field_range(result, ATC_FIELD_CONTINUUM, &lo, &hi) == ATC_OK);
  EXPECT(lo == 10 && hi == 99);
  double u[101];
  EXPECT(atc_result_field(result, ATC_FIELD_COUPLED, u, 50) == ATC_ERR_INVALID_ARGUMENT);
  EXPECT(atc_result_field(result, ATC_FIELD_COUPLED, u, 101) == ATC_OK);
  EXPECT(u[19] == controls[0] && u[20] == controls[1]);
  EXPECT(u[100] == 0.0);

  char* csv = NULL;
  EXPECT(atc_result_csv(result, &csv) == ATC_OK);
  EXPECT(csv && strncmp(csv, "atom_index,u_atc,u_a_op,u_c_op\n", 31) == 0);
  atc_string_free(csv);
  char* summary = NULL;
  EXPECT(atc_result_summary(result, &summary) == ATC_OK);
  EXPECT(summary && strstr(summary, "\"theta_c_k\"") != NULL);
  atc_string_free(summary);

  double ref[101], consistent[101], c4[4];
  EXPECT(atc_solve_reference(chain, ref, 101) == ATC_OK);
  EXPECT(atc_solve_consistent(chain, decomp, c4, consistent, 101) == ATC_OK);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) worst = fmax(worst, fabs(ref[i] - consistent[i]));
  EXPECT(worst < 1e-10);

  double q = 0.0;
  EXPECT(atc_q_norm(chain, decomp, &q) == ATC_OK);
  EXPECT(q > 1.0);

  int passed = 0;
  char* report = NULL;
  EXPECT(atc_patch_test(chain, decomp, 0.01, &passed, &report) == ATC_ERR_INVALID_ARGUMENT);

  atc_chain* zero = NULL;
  atc_decomposition* zd = NULL;
  EXPECT(atc_chain_create(100, 1.0, -1.0 / 6.0, "zero", &zero) == ATC_OK);
  EXPECT(atc_decomposition_create(zero, 10, 20, &zd) == ATC_OK);
  EXPECT(atc_patch_test(zero, zd, 0.01, &passed, &report) == ATC_OK);
  EXPECT(passed == 1);
  atc_string_free(report);

  int all = 0;
  char* card = NULL;
  EXPECT(atc_verify(chain, decomp, 7, &all, &card) == ATC_OK);
  EXPECT(all == 1);
  atc_string_free(card);

  const int ns[] = {100, 400};
  atc_sweep_config cfg = {ns, 2, 2.0, 0.5, 2.0, 1.0, -1.0 / 6.0, "sine:1", ATC_LOAD_CONTINUUM, 1};
  char* sweep_csv = NULL;
  EXPECT(atc_sweep(&cfg, &sweep_csv, NULL) == ATC_OK);
  EXPECT(sweep_csv && strstr(sweep_csv, "\n400,20,40,") != NULL);
  atc_string_free(sweep_csv);

  const double table[6] = {0, 0, 1, 0, 0, 0};
  atc_chain* tabled = NULL;
  EXPECT(atc_chain_create_from_table(5, 1.0, -1.0 / 6.0, table, 5, &tabled) ==
         ATC_ERR_INVALID_ARGUMENT);
  EXPECT(atc_chain_create_from_table(5, 1.0, -1.0 / 6.0, table, 6, &tabled) == ATC_OK);
  EXPECT(atc_chain_create_from_file(5, 1.0, -1.0 / 6.0, "/nonexistent/f.csv", &tabled) ==
         ATC_ERR_IO);

  EXPECT(atc_solve(NULL, decomp, &result) == ATC_ERR_INVALID_ARGUMENT);

  atc_result_destroy(result);
  atc_decomposition_destroy(decomp);
  atc_decomposition_destroy(zd);
  atc_chain_destroy(chain);
  atc_chain_destroy(zero);
  atc_chain_destroy(tabled);

  if (failures) fprintf(stderr, "%d expectation(s) failed\n", failures);
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
