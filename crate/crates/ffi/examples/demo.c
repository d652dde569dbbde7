/* Factorizes stdin and prints one factor per line in the text format. */
#include <stdio.h>

#include "lzdawg.h"

static int check(LzStatus s, const char *what) {
  if (s != LZ_STATUS_OK) {
    fprintf(stderr, "%s: %s\n", what, lz_status_message((int32_t)s));
    return 1;
  }
  return 0;
}

static void drain(LzFactorizer *h) {
  LzFactor buf[256];
  uintptr_t got = 0;
  do {
    if (lz_take(h, buf, 256, &got) != LZ_STATUS_OK) return;
    for (uintptr_t i = 0; i < got; i++) {
      if (buf[i].is_literal)
        printf("L %u\n", (unsigned)buf[i].byte);
      else
        printf("C %llu %llu\n", (unsigned long long)buf[i].src, (unsigned long long)buf[i].len);
    }
  } while (got > 0);
}

int main(int argc, char **argv) {
  LzConfig cfg = lz_config_default();
  if (argc > 1 && argv[1][0] == 'r') cfg.mode = LZ_MODE_RLE;
  LzFactorizer *h = NULL;
  if (check(lz_factorizer_new(&cfg, &h), "new")) return 2;
  unsigned char chunk[4096];
  size_t n;
  while ((n = fread(chunk, 1, sizeof chunk, stdin)) > 0) {
    if (check(lz_push(h, chunk, n), "push")) return 2;
    drain(h);
  }
  if (check(lz_finish(h), "finish")) return 2;
  drain(h);
  LzStats st;
  if (lz_stats(h, &st) == LZ_STATUS_OK)
    fprintf(stderr, "N=%llu z=%llu\n", (unsigned long long)st.n, (unsigned long long)st.z);
  lz_factorizer_free(h);
  return 0;
}
