#pragma once

#include <sstream>
#include <string>

#include "apar/dataset.hpp"
#include "apar/lexicon.hpp"

namespace fixtures {

// Hand-checkable corpus: 6 users, 5 items, 12 valid lines of which one
// duplicates (u1,v1) -> 11 records after dedup; one line is rejected for an
// out-of-scale rating. u6 has no review text.
inline const char* kCorpus = R"(
{"reviewerID":"u1","asin":"v1","overall":4,"reviewText":"great","helpful":[3,4],"unixReviewTime":100}
{"reviewerID":"u1","asin":"v1","overall":2,"reviewText":"meh on reflection","helpful":[1,2],"unixReviewTime":200}
{"reviewerID":"u1","asin":"v2","overall":5,"reviewText":"we talked to the child","helpful":[2,4],"unixReviewTime":300}
{"reviewerID":"u2","asin":"v1","overall":3,"reviewText":"the man and the baby talk","helpful":[0,0],"unixReviewTime":400}
{"reviewerID":"u2","asin":"v3","overall":5,"reviewText":"love it, great and happy","helpful":[4,4],"unixReviewTime":500}
{"reviewerID":"u3","asin":"v2","overall":1,"reviewText":"terrible, awful, sad","helpful":[1,4],"unixReviewTime":600}
{"reviewerID":"u3","asin":"v3","overall":2,"reviewText":"hate the bad ending","helpful":[0,2],"unixReviewTime":700}
{"reviewerID":"u4","asin":"v4","overall":5,"reviewText":"I think it is a curious idea","helpful":[5,5],"unixReviewTime":800}
{"reviewerID":"u4","asin":"v1","overall":4,"reviewText":"reasons to wonder and imagine","helpful":[1,1],"unixReviewTime":900}
{"reviewerID":"u5","asin":"v5","overall":9,"reviewText":"out of scale","helpful":[0,0],"unixReviewTime":1000}
{"reviewerID":"u5","asin":"v5","overall":5,"reviewText":"friends and family together","helpful":[2,3],"unixReviewTime":1100}
{"reviewerID":"u6","asin":"v2","overall":3,"reviewText":"","helpful":[0,0],"unixReviewTime":1200}
{"reviewerID":"u6","asin":"v4","overall":4,"reviewText":"","helpful":[0,0],"unixReviewTime":1300}
)";

inline apar::RatingsDataset corpus_dataset() {
    std::istringstream in(kCorpus);
    return apar::parse_reviews(in, "instant-video");
}

inline const char* kLexicon = R"(%category SP
talk*
child
%category HW
baby
man
%category SW
view*
seen
)";

inline apar::Lexicon small_lexicon() {
    std::istringstream in(kLexicon);
    return apar::Lexicon::load(in);
}

inline const char* kWeights = R"(trait,category,weight
Conscientiousness,SP,0.264
Conscientiousness,HW,0.203
Conscientiousness,SW,-0.227
Openness,SW,0.2
Extraversion,SP,0.1
Agreeableness,HW,0.1
Neuroticism,SW,0.05
)";

inline apar::WeightTable small_weights() {
    std::istringstream in(kWeights);
    return apar::WeightTable::load(in);
}

}  // namespace fixtures
