# client.py
import typer

from bentcli.cli.analysis import analyze, census, diffspec
from bentcli.cli.construct import construct
from bentcli.cli.equiv import equiv
from bentcli.cli.verify import verify

app = typer.Typer(no_args_is_help=True, help="Bent components of vectorial Boolean functions")
app.command("analyze", help="Summary of a function")(analyze)
app.command("census", help="Bent-component census")(census)
app.command("diffspec", help="Differential spectra")(diffspec)
app.command("construct", help="Family builders and vectorial bent lifts")(construct)
app.command("equiv", help="EA/CCZ invariance experiments")(equiv)
app.command("verify", help="Theorem verification campaigns")(verify)

if __name__ == "__main__":
    app()
