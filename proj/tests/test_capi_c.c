/*
 * Copyright 2026 The safestop Authors
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

/* The public header compiles as C and the library links from a C program. */

#include <safestop/safestop.h>

#include <math.h>
#include <stdio.h>

int main(void)
{
  const double points[] = {1.0, 0.0, 1.0};
  safestop_map * map = NULL;
  safestop_state state = {{0.0, 0.0, 1.0}, {2.0, 0.0, 0.0}, {0}, {0}, 0, 0, 0, 0};
  safestop_verdict verdict;
  safestop_trajectory * trajectory = NULL;
  double duration = 0.0;

  if (safestop_map_create(points, 1, &map) != SAFESTOP_OK) {
    fprintf(stderr, "map: %s\n", safestop_last_error());
    return 1;
  }
  if (safestop_check_imminent(&state, map, NULL, &verdict) != SAFESTOP_OK || !verdict.triggered) {
    fprintf(stderr, "expected a trigger\n");
    return 1;
  }
  if (safestop_generate_stop_trajectory(&state, map, NULL, NULL, &trajectory) != SAFESTOP_OK ||
      safestop_trajectory_duration(trajectory, &duration) != SAFESTOP_OK || !(duration > 0.0)) {
    fprintf(stderr, "trajectory: %s\n", safestop_last_error());
    return 1;
  }
  printf("safestop %s: cost %.3f, stop in %.3f s\n", safestop_version(), verdict.worst_cost, duration);
  safestop_trajectory_destroy(trajectory);
  safestop_map_destroy(map);
  return 0;
}
