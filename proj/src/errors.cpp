#include "gridgram/errors.hpp"

#include <sstream>

namespace gridgram {

namespace {

std::string refusal_message(double combinations, double cap) {
    std::ostringstream os;
    os.precision(17);
    os << "brute-force enumeration refused: " << combinations
       << " edge subsets exceed the cap of " << cap
       << " (exhaustive search over subsets is NP-hard in general)";
    return os.str();
}

}  // namespace

CombinatorialRefusal::CombinatorialRefusal(double combinations, double cap)
    : Error(refusal_message(combinations, cap)), combinations_(combinations) {}

}  // namespace gridgram
