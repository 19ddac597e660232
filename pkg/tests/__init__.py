# Testes da distância semântica entre 2CQs
