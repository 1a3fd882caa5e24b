"""Manifesto de execução gravado junto de cada saída da linha de comando."""
from dataclasses import dataclass, field

from Utilidades import utils

VERSION = "1.0.0"
TOOL = "yamabe3h"


@dataclass
class RunManifest:
    """
    Comando, resumos SHA-256 das entradas e saídas, configuração resolvida e status final.
    Não registra horário nem número de threads, para que execuções repetidas gerem bytes idênticos.
    """

    command: str
    inputs: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    status: str = ""
    outputs: dict = field(default_factory=dict)
    version: str = VERSION

    def add_input(self, name, data):
        """Registra o resumo SHA-256 de uma entrada."""
        self.inputs[name] = utils.sha256_digest(data)

    def to_dict(self):
        return {
            "tool": TOOL,
            "version": self.version,
            "command": self.command,
            "inputs": dict(self.inputs),
            "config": dict(self.config),
            "status": self.status,
            "outputs": dict(self.outputs),
        }

    def write(self, path):
        """Grava o manifesto em JSON e devolve o resumo do arquivo gravado."""
        return utils.write_text(path, utils.dump_json(self.to_dict()))
