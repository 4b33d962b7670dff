"""Run the descent checkers on a few small simplicial sets and watch the
different conditions agree or fail together."""

from higher_segal.descent import VARIANTS, check_excision, check_segal, membrane
from higher_segal.polytopes import segal_cover
from higher_segal.simplicial import fixture_corpus, path_object

corpus = fixture_corpus(N=6)

X = corpus["boundary-2"]
sp = segal_cover(2, 1)
print("boundary of the 2-simplex has", X.size(2), "triangles but", len(membrane(X, sp)), "composable edge pairs")

print(f"{'fixture':14}{'1-Segal':>9}{'2-Segal lo':>12}{'2-Segal up':>12}  excision verdicts")
for name, X in corpus.items():
    seg1 = check_segal(X, 1, "lower", 4).passed
    lo = check_segal(X, 2, "lower", 4).passed
    up = check_segal(X, 2, "upper", 4).passed
    exc = {v: check_excision(X, 1, v, 4).passed for v in VARIANTS}
    print(f"{name:14}{seg1!s:>9}{lo!s:>12}{up!s:>12}  {exc}")

X = corpus["nerve-chain"]
print("left path object of the chain nerve is 1-excisive:", check_excision(path_object(X, "left"), 1, "delta", 4).passed)
