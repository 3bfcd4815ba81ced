// One run of the key exchange and the three key recovery attacks on its transcript.
#include <thompson/crypto.hpp>

#include <iostream>

using namespace thompson;

int main(int argc, char** argv)
{
    ProtocolParams p;
    p.seed = argc > 1 ? std::stoull(argv[1]) : 1;
    ProtocolRun run = run_protocol(p);
    std::cout << "|w| = " << run.transcript.w.size() << ", |K| = " << run.K.size() << '\n';

    RecoveredKey r = attack(run.transcript);
    std::cout << "normal-form attack recovers K: " << std::boolalpha << (r.K == run.K) << '\n';
    r = attack_transitivity(run.transcript);
    std::cout << "transitivity attack recovers K: " << (r.K == run.K) << '\n';

    p.variant = Variant::KoLee;
    ProtocolRun kl = run_protocol(p);
    r = attack_kolee(kl.transcript);
    std::cout << "Ko-Lee variant attack recovers K: " << (r.K == kl.K) << '\n';
}
