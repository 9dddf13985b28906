#pragma once

// Bundled corpus entries, embedded at build time from corpus/*.json by
// cmake/embed_corpus.cmake.

namespace puzlog::detail {

struct EmbeddedPuzzle {
    const char* name;
    const char* json;
};

extern const EmbeddedPuzzle kEmbeddedCorpus[];
extern const int kEmbeddedCorpusCount;

}  // namespace puzlog::detail
