#include <stdio.h>
#include <string.h>

#include "spectral_forge.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      const char *msg = sgf_last_error_message();                    \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
              msg ? msg : "no error");                               \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(void) {
  const char *text = "#nodes 6\n0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n";
  SgfGraph *g = NULL;
  CHECK(sgf_graph_from_edge_list(text, &g) == SGF_STATUS_OK);
  CHECK(sgf_graph_node_count(g) == 6);

  SgfParams params = sgf_params_default();
  params.alpha = 1.0;
  params.seed = 3;
  SgfGraph *out = NULL;
  CHECK(sgf_generate(g, &params, &out) == SGF_STATUS_OK);

  char *s = NULL;
  CHECK(sgf_graph_to_edge_list(out, &s) == SGF_STATUS_OK);
  CHECK(strcmp(s, text) == 0);
  sgf_string_free(s);

  params.alpha = 2.0;
  CHECK(sgf_generate(g, &params, &out) == SGF_STATUS_INVALID_ARGUMENT);
  CHECK(sgf_last_error_message() != NULL);

  sgf_graph_free(out);
  sgf_graph_free(g);
  puts("ok");
  return 0;
}
