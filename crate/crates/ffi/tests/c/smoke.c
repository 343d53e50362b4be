#include <math.h>
#include <stdio.h>
#include <string.h>

#include "recfair.h"

#define CHECK(call)                                                         \
  do {                                                                      \
    RfStatus s_ = (call);                                                   \
    if (s_ != RF_STATUS_OK) {                                               \
      fprintf(stderr, "%s failed (%d): %s\n", #call, (int)s_, rf_last_error()); \
      return 1;                                                             \
    }                                                                       \
  } while (0)

#define EXPECT(cond)                                    \
  do {                                                  \
    if (!(cond)) {                                      \
      fprintf(stderr, "expectation failed: %s\n", #cond); \
      return 1;                                         \
    }                                                   \
  } while (0)

int main(void) {
  RfCatalog *cat = NULL;
  CHECK(rf_catalog_with_size(10, &cat));

  size_t items[] = {0, 1, 2, 3, 4, 5};
  size_t lengths[] = {3, 3};
  RfRun *run = NULL;
  CHECK(rf_run_from_lists(items, lengths, 2, &run));

  double jain = 0.0;
  CHECK(rf_exposure_measure("Jain", run, cat, 3, RF_VARIANT_ORIGINAL, &jain));
  EXPECT(fabs(jain - 0.6) < 1e-12);

  double lo = 0.0, hi = 0.0;
  CHECK(rf_exposure_bounds("Gini", 3, 2, 10, &lo, &hi));
  EXPECT(lo > hi);

  const char *qtext = "u0\ti0\t1\nu0\ti1\t1\nu1\ti9\t1\n";
  RfQrels *q = NULL;
  CHECK(rf_qrels_from_text(qtext, cat, &q));
  double hr = 0.0;
  RfRun *named = NULL;
  CHECK(rf_run_from_text("u0\ti0\t1\nu0\ti5\t2\nu1\ti1\t1\nu1\ti2\t2\n", cat, &named));
  CHECK(rf_effectiveness("HR", named, q, 2, &hr));
  EXPECT(fabs(hr - 0.5) < 1e-12);

  double flags_p[] = {0.01, 0.02, 0.04, 0.5};
  uint8_t flags[4];
  CHECK(rf_bh_correct(flags_p, 4, 0.05, flags));
  EXPECT(flags[0] == 1 && flags[1] == 1 && flags[2] == 0 && flags[3] == 0);

  RfFrontier *pf = NULL;
  CHECK(rf_frontier_generate(q, NULL, cat, 2, "NDCG", "Jain", RF_VARIANT_CORRECTED, 0, &pf));
  size_t len = 0;
  CHECK(rf_frontier_len(pf, &len));
  EXPECT(len >= 1);
  double d = -1.0;
  CHECK(rf_frontier_distance(pf, named, q, cat, 2, RF_VARIANT_CORRECTED, 0.5, &d));
  EXPECT(d >= 0.0);

  EXPECT(rf_exposure_measure("Nope", run, cat, 3, RF_VARIANT_ORIGINAL, &jain) == RF_STATUS_INVALID_ARGUMENT);
  EXPECT(rf_last_error() != NULL && strstr(rf_last_error(), "Nope") != NULL);
  EXPECT(rf_catalog_len(NULL, &len) == RF_STATUS_NULL_POINTER);

  rf_frontier_free(pf);
  rf_run_free(named);
  rf_qrels_free(q);
  rf_run_free(run);
  rf_catalog_free(cat);
  rf_catalog_free(NULL);
  printf("ok %s\n", rf_version());
  return 0;
}
