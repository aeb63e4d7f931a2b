from aodcomm.cli import main

main()
