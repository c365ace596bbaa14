# Walk through the document representation: tokenize, stop-list, stem,
# prune rare stems, weight by term frequency over total terms.
#
# Run:  python demos/01_term_vectors.py

from datetime import date

from quickstep.textpipe import (
    RawDocument,
    build_vector,
    cosine,
    default_stoplist,
    tokenize,
)

text = (
    "Recommender systems filter the stream of research papers. "
    "A recommender learns the topics a reader browses, and recommends "
    "papers on those topics. Filtering beats browsing when papers pile up."
)

# 1. tokenization: lower-case alphanumeric runs
print("tokens:", tokenize(text)[:12], "...")

# 2. the stop list removes glue words ("the", "a", "of", ...)
stoplist = default_stoplist()
print("stop list size:", len(stoplist))

# 3. the full pipeline: note how "recommender"/"recommends" and
#    "papers"/"paper" collapse onto shared stems, and how stems seen once
#    are pruned
doc = RawDocument("demo-1", "http://example/paper.pdf", text, date.today())
vector = build_vector(doc, stoplist)
for stem, weight in sorted(vector.weights.items(), key=lambda sw: -sw[1]):
    print(f"  {stem:<12} {weight:.4f}")
print("weight sum:", sum(vector.weights.values()), "(<= 1 by construction)")

# 4. cosine similarity drives everything downstream
other = RawDocument(
    "demo-2",
    "http://example/other.pdf",
    "Topic filtering for research papers: papers, topics, filtering.",
    date.today(),
)
other_vector = build_vector(other, stoplist)
print("cosine(demo-1, demo-2):", round(cosine(vector, other_vector), 4))
print("cosine(demo-1, demo-1):", cosine(vector, vector))
